#include "slrh/cli.hpp"

int main(int argc, char** argv) { return slrh::run_cli(std::vector<std::string>(argv + 1, argv + argc)); }
