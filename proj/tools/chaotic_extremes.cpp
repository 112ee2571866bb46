#include "chaotic_extremes/cli/app.hpp"

int main(int argc, char** argv) { return chaotic_extremes::cli::run(argc, argv); }
