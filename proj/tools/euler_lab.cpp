#include "euler_lab/cli.hpp"

int main(int argc, char** argv) { return euler_lab::run_cli(argc, argv); }
