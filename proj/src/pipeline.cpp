#include "skilldecomp/pipeline.hpp"

namespace skilldecomp {
int run_cli(int, const char* const*) { return 1; }
}
