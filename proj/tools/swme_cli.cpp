#include "swme/commands.hpp"

int main(int argc, char** argv) { return swme::run_cli(argc, argv); }
