#include "hardyop/cli.hpp"

int main(int argc, char** argv) { return hardyop::run_cli(argc, argv); }
