#include "fsnet/cli.hpp"

int main(int argc, char** argv) { return fsnet::run_cli(argc, argv); }
