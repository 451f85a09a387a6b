#include "iefsvm/cli.hpp"

int main(int argc, char** argv) { return iefsvm::run_cli(argc, argv); }
