#include "discomax/cli.hpp"

int main(int argc, char** argv) { return discomax::run_cli(argc, argv); }
