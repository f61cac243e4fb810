#include "commands.hpp"

int main(int argc, char** argv) { return fsoqos::cli::run(argc, argv); }
