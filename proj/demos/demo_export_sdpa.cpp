// Exports an instance in SDPA sparse format and reads it back.

#include <cstdio>

#include "codebound/sdpa_io.hpp"

int main(int argc, char** argv) {
  using namespace codebound;
  int n = argc > 1 ? std::atoi(argv[1]) : 6;
  int d = argc > 2 ? std::atoi(argv[2]) : 4;
  SdpProblem p = build_a4_problem(n, d);
  const char* path = "a4_instance.dat-s";
  export_sdpa_sparse(p, path);
  SdpProblem q = import_sdpa_sparse(path);
  std::printf("wrote %s: %d variables, %zu blocks; reimport matches: %s\n", path, p.num_vars(),
              p.blocks.size(),
              export_sdpa_sparse_string(q) == export_sdpa_sparse_string(p) ? "yes" : "no");
  return 0;
}
