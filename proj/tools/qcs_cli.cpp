#include "qcs/cli.hpp"

int main(int argc, char** argv) { return qcs::run_cli(argc, argv); }
