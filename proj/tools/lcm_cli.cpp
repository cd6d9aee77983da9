#include "lcm/cli.hpp"

int main(int argc, char** argv) { return lcm::run(argc, argv); }
