#include "cmk_cli/cli.hpp"

int main(int argc, char** argv) { return cmk::cli::cli_main(argc, argv); }
