#include "cli.hpp"

int main(int argc, char** argv) { return swgain::cli::main_entry(argc, argv); }
