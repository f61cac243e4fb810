#include <benchmark/benchmark.h>

// The distro's libbenchmark_main.a ships GCC 11.2 LTO bytecode only, so the
// entry point lives here and the shared libbenchmark is linked instead.
BENCHMARK_MAIN();
