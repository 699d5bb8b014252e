#include "lrp/cli.hpp"

int main(int argc, char** argv) { return lrp::run_cli(argc, argv); }
