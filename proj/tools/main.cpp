#include "varops/cli_config.hpp"

int main(int argc, char** argv) { return varops::main_with_args(argc, argv); }
