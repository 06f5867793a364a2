#include <benchmark/benchmark.h>

// The packaged benchmark_main archive carries LTO bytecode from another gcc.
BENCHMARK_MAIN();
