#include "tautweight/cli.hpp"

int main(int argc, char** argv) { return tw::cli::main_entry(argc, argv); }
