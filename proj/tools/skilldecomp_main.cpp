#include "skilldecomp/pipeline.hpp"

int main(int argc, char** argv) { return skilldecomp::run_cli(argc, argv); }
