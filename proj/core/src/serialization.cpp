#include "fsoqos/serialization.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fsoqos/error.hpp"

namespace fsoqos {

using json = nlohmann::ordered_json;
using namespace learners;

namespace {

constexpr std::string_view kFormat = "fsoqos-model";
constexpr int kVersion = 1;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Every lookup goes through here so a missing key surfaces as SchemaError.
const json& field(const json& j, const char* key) {
    if (!j.is_object()) throw SchemaError(std::string("expected an object holding '") + key + "'");
    const auto it = j.find(key);
    if (it == j.end()) throw SchemaError(std::string("missing key '") + key + "'");
    return *it;
}

template <class T>
T get(const json& j, const char* key) {
    try {
        return field(j, key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("bad value for '") + key + "': " + e.what());
    }
}

json tree_node_json(const std::vector<TreeNode>& nodes, std::int32_t index) {
    const auto& node = nodes.at(static_cast<std::size_t>(index));
    json j;
    if (node.is_leaf()) {
        j["value"] = node.value;
        return j;
    }
    j["feature"] = node.feature;
    j["threshold"] = node.threshold;
    j["value"] = node.value;
    j["left"] = tree_node_json(nodes, node.left);
    j["right"] = tree_node_json(nodes, node.right);
    return j;
}

std::int32_t read_tree_node(const json& j, std::vector<TreeNode>& nodes) {
    const auto index = static_cast<std::int32_t>(nodes.size());
    nodes.emplace_back();
    TreeNode node;
    node.value = get<double>(j, "value");
    if (j.contains("feature")) {
        node.feature = get<std::int32_t>(j, "feature");
        node.threshold = get<double>(j, "threshold");
        node.left = read_tree_node(field(j, "left"), nodes);
        node.right = read_tree_node(field(j, "right"), nodes);
    }
    nodes[static_cast<std::size_t>(index)] = node;
    return index;
}

json tree_options_json(const TreeOptions& o) {
    return json{{"min_leaf_size", o.min_leaf_size}, {"max_depth", o.max_depth}};
}

TreeOptions read_tree_options(const json& j) {
    TreeOptions o;
    o.min_leaf_size = get<std::size_t>(j, "min_leaf_size");
    o.max_depth = get<std::size_t>(j, "max_depth");
    return o;
}

json tree_json(const RegressionTree& tree) {
    return json{{"n_features", tree.n_features()}, {"root", tree_node_json(tree.nodes(), 0)}};
}

RegressionTree read_tree(const json& j, const TreeOptions& options) {
    std::vector<TreeNode> nodes;
    read_tree_node(field(j, "root"), nodes);
    return RegressionTree(std::move(nodes), get<std::size_t>(j, "n_features"), options);
}

json trees_json(const std::vector<RegressionTree>& trees) {
    json arr = json::array();
    for (const auto& t : trees) arr.push_back(tree_json(t));
    return arr;
}

std::vector<RegressionTree> read_trees(const json& arr, const TreeOptions& options) {
    if (!arr.is_array()) throw SchemaError("expected an array of trees");
    std::vector<RegressionTree> trees;
    trees.reserve(arr.size());
    for (const auto& t : arr) trees.push_back(read_tree(t, options));
    return trees;
}

json mlp_hyper(const neural::MlpModel& m) {
    return json{{"layer_sizes", m.layer_sizes()},
                {"hidden_activation", neural::to_string(m.hidden_activation())},
                {"output_activation", neural::to_string(m.output_activation())}};
}

struct Encoded {
    std::string type;
    json hyper;
    json payload;
};

Encoded encode(const AnyModel& model);
AnyModel decode(const std::string& type, const json& hyper, const json& payload);

Encoded encode_base(const BaseModel& model) { return encode(to_any(model)); }

Encoded encode(const AnyModel& model) {
    return std::visit(
        Overloaded{
            [](const RegressionTree& t) {
                return Encoded{"tree", tree_options_json(t.options()), tree_json(t)};
            },
            [](const RandomForestModel& f) {
                const auto& o = f.options();
                json hyper{{"n_trees", o.n_trees},   {"mtry", o.mtry},           {"min_leaf_size", o.min_leaf_size},
                           {"max_depth", o.max_depth}, {"bootstrap", o.bootstrap}, {"seed", o.seed}};
                json payload{{"oob_error", f.oob_error() ? json(*f.oob_error()) : json(nullptr)},
                             {"trees", trees_json(f.trees())}};
                return Encoded{"forest", hyper, payload};
            },
            [](const GradientBoostModel& g) {
                const auto& o = g.options();
                json hyper{{"n_trees", o.n_trees},
                           {"learning_rate", o.learning_rate},
                           {"min_leaf_size", o.min_leaf_size},
                           {"max_depth", o.max_depth}};
                json payload{{"n_features", g.n_features()}, {"init_value", g.init_value()}, {"trees", trees_json(g.trees())}};
                return Encoded{"gbr", hyper, payload};
            },
            [](const AdaBoostModel& a) {
                json payload{{"n_features", a.n_features()}, {"alphas", a.alphas()}, {"errors", a.errors()}};
                json hyper;
                if (a.mode() == AdaBoostMode::BinaryClassifier) {
                    hyper = json{{"mode", "classifier"}, {"n_rounds", a.size()}};
                    json stumps = json::array();
                    for (const auto& s : a.stumps()) {
                        stumps.push_back(json{{"feature", s.feature}, {"threshold", s.threshold}, {"polarity", s.polarity}});
                    }
                    payload["stumps"] = std::move(stumps);
                } else {
                    hyper = tree_options_json(a.weak_options());
                    hyper["mode"] = "r2";
                    hyper["n_rounds"] = a.size();
                    payload["trees"] = trees_json(a.trees());
                }
                return Encoded{"adaboost", hyper, payload};
            },
            [](const stacking::StackedModel& s) {
                json bases = json::array();
                for (const auto& b : s.base_models()) {
                    auto e = encode_base(b);
                    bases.push_back(json{{"type", e.type}, {"hyperparameters", e.hyper}, {"model", e.payload}});
                }
                json hyper{{"n_folds", s.n_folds()}, {"seed", s.seed()}, {"n_base_models", s.base_models().size()}};
                json payload{{"weights", s.weights()}, {"base_models", std::move(bases)}};
                return Encoded{"stacked", hyper, payload};
            },
            [](const neural::MlpModel& m) {
                json layers = json::array();
                for (const auto& l : m.layers()) {
                    layers.push_back(json{{"inputs", l.inputs}, {"outputs", l.outputs}, {"weights", l.weights}, {"biases", l.biases}});
                }
                const auto& sc = m.scaling();
                json scaling{{"input_mean", sc.input_mean},
                             {"input_scale", sc.input_scale},
                             {"target_offset", sc.target_offset},
                             {"target_scale", sc.target_scale}};
                return Encoded{"mlp", mlp_hyper(m), json{{"layers", std::move(layers)}, {"scaling", std::move(scaling)}}};
            },
        },
        model);
}

BaseModel to_base(AnyModel model) {
    return std::visit(Overloaded{
                          [](stacking::StackedModel&&) -> BaseModel { throw SchemaError("stacked models cannot be nested"); },
                          [](auto&& m) -> BaseModel { return BaseModel(std::move(m)); },
                      },
                      std::move(model));
}

AnyModel decode(const std::string& type, const json& hyper, const json& payload) {
    if (type == "tree") {
        return read_tree(payload, read_tree_options(hyper));
    }
    if (type == "forest") {
        ForestOptions o;
        o.n_trees = get<std::size_t>(hyper, "n_trees");
        o.mtry = get<std::size_t>(hyper, "mtry");
        o.min_leaf_size = get<std::size_t>(hyper, "min_leaf_size");
        o.max_depth = get<std::size_t>(hyper, "max_depth");
        o.bootstrap = get<bool>(hyper, "bootstrap");
        o.seed = get<std::uint64_t>(hyper, "seed");
        const auto& oob = field(payload, "oob_error");
        std::optional<double> oob_error;
        if (!oob.is_null()) oob_error = get<double>(payload, "oob_error");
        TreeOptions tree_options{o.min_leaf_size, o.max_depth};
        return RandomForestModel(read_trees(field(payload, "trees"), tree_options), o, oob_error);
    }
    if (type == "gbr") {
        GradientBoostOptions o;
        o.n_trees = get<std::size_t>(hyper, "n_trees");
        o.learning_rate = get<double>(hyper, "learning_rate");
        o.min_leaf_size = get<std::size_t>(hyper, "min_leaf_size");
        o.max_depth = get<std::size_t>(hyper, "max_depth");
        TreeOptions tree_options{o.min_leaf_size, o.max_depth};
        return GradientBoostModel(get<double>(payload, "init_value"), read_trees(field(payload, "trees"), tree_options), o,
                                  get<std::size_t>(payload, "n_features"));
    }
    if (type == "adaboost") {
        const auto mode = get<std::string>(hyper, "mode");
        auto alphas = get<std::vector<double>>(payload, "alphas");
        auto errors = get<std::vector<double>>(payload, "errors");
        const auto k = get<std::size_t>(payload, "n_features");
        if (mode == "classifier") {
            std::vector<Stump> stumps;
            for (const auto& s : field(payload, "stumps")) {
                stumps.push_back(Stump{get<std::size_t>(s, "feature"), get<double>(s, "threshold"), get<int>(s, "polarity")});
            }
            return AdaBoostModel::classifier(std::move(stumps), std::move(alphas), std::move(errors), k);
        }
        if (mode == "r2") {
            const auto options = read_tree_options(hyper);
            return AdaBoostModel::regressor(read_trees(field(payload, "trees"), options), std::move(alphas),
                                            std::move(errors), k, options);
        }
        throw SchemaError("unknown adaboost mode '" + mode + "'");
    }
    if (type == "stacked") {
        std::vector<BaseModel> bases;
        for (const auto& b : field(payload, "base_models")) {
            bases.push_back(to_base(decode(get<std::string>(b, "type"), field(b, "hyperparameters"), field(b, "model"))));
        }
        return stacking::StackedModel(std::move(bases), get<std::vector<double>>(payload, "weights"),
                                      get<std::size_t>(hyper, "n_folds"), get<std::uint64_t>(hyper, "seed"));
    }
    if (type == "mlp") {
        neural::MlpModel m(get<std::vector<std::size_t>>(hyper, "layer_sizes"),
                           neural::parse_activation(get<std::string>(hyper, "hidden_activation")),
                           neural::parse_activation(get<std::string>(hyper, "output_activation")));
        const auto& layers = field(payload, "layers");
        if (!layers.is_array() || layers.size() != m.layers().size()) throw SchemaError("layer count mismatch");
        for (std::size_t i = 0; i < layers.size(); ++i) {
            auto& dst = m.layers()[i];
            auto weights = get<std::vector<double>>(layers[i], "weights");
            auto biases = get<std::vector<double>>(layers[i], "biases");
            if (get<std::size_t>(layers[i], "inputs") != dst.inputs || get<std::size_t>(layers[i], "outputs") != dst.outputs ||
                weights.size() != dst.weights.size() || biases.size() != dst.biases.size()) {
                throw SchemaError("layer " + std::to_string(i) + " shape mismatch");
            }
            dst.weights = std::move(weights);
            dst.biases = std::move(biases);
        }
        const auto& sc = field(payload, "scaling");
        neural::Scaling scaling;
        scaling.input_mean = get<std::vector<double>>(sc, "input_mean");
        scaling.input_scale = get<std::vector<double>>(sc, "input_scale");
        scaling.target_offset = get<double>(sc, "target_offset");
        scaling.target_scale = get<double>(sc, "target_scale");
        m.set_scaling(std::move(scaling));
        return m;
    }
    throw SchemaError("unknown model type '" + type + "'");
}

}  // namespace

std::string_view model_type(const AnyModel& model) {
    return std::visit(Overloaded{
                          [](const RegressionTree&) { return std::string_view("tree"); },
                          [](const RandomForestModel&) { return std::string_view("forest"); },
                          [](const GradientBoostModel&) { return std::string_view("gbr"); },
                          [](const AdaBoostModel&) { return std::string_view("adaboost"); },
                          [](const stacking::StackedModel&) { return std::string_view("stacked"); },
                          [](const neural::MlpModel&) { return std::string_view("mlp"); },
                      },
                      model);
}

AnyModel to_any(BaseModel model) {
    return std::visit([](auto&& m) -> AnyModel { return AnyModel(std::move(m)); }, std::move(model));
}

double predict_any(const AnyModel& model, std::span<const double> x) {
    return std::visit(Overloaded{
                          [&](const neural::MlpModel& m) { return m.forward(x); },
                          [&](const auto& m) { return m.predict(x); },
                      },
                      model);
}

std::size_t n_features(const AnyModel& model) {
    return std::visit([](const auto& m) { return m.n_features(); }, model);
}

std::string serialize_model(const ModelFile& file) {
    if (file.feature_names.size() != n_features(file.model)) {
        throw SchemaError("feature name count does not match the model input size");
    }
    const auto e = encode(file.model);
    json doc;
    doc["format"] = kFormat;
    doc["version"] = kVersion;
    doc["type"] = e.type;
    doc["seed"] = file.seed;
    doc["feature_names"] = file.feature_names;
    doc["hyperparameters"] = e.hyper;
    doc["model"] = e.payload;
    return doc.dump(1) + "\n";
}

ModelFile deserialize_model(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
    if (get<std::string>(doc, "format") != kFormat) throw SchemaError("not a model file");
    if (get<int>(doc, "version") != kVersion) throw SchemaError("unsupported model file version");
    ModelFile file;
    file.seed = get<std::uint64_t>(doc, "seed");
    file.feature_names = get<std::vector<std::string>>(doc, "feature_names");
    try {
        file.model = decode(get<std::string>(doc, "type"), field(doc, "hyperparameters"), field(doc, "model"));
    } catch (const std::domain_error& e) {
        throw SchemaError(std::string("inconsistent model: ") + e.what());
    } catch (const std::out_of_range& e) {
        throw SchemaError(std::string("inconsistent model: ") + e.what());
    }
    if (file.feature_names.size() != n_features(file.model)) {
        throw SchemaError("feature name count does not match the model input size");
    }
    return file;
}

void save_model(const std::filesystem::path& path, const ModelFile& file) {
    const auto text = serialize_model(file);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return deserialize_model(buffer.str());
}

}  // namespace fsoqos
