#include "apc/cli.hpp"

int main(int argc, char** argv) { return apc::run_cli(argc, argv); }
