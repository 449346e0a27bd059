// Compares the serial reference kernels against the OpenMP ones and checks
// that both return identical results. Workloads are full enumerations (no
// early exit), so the timings are stable.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qsync/lemma_checks.hpp"
#include "qsync/sync_search.hpp"

using namespace qsync;

namespace {

template <typename Fn>
double time_of(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

void report(const char* name, double serial, double parallel, bool identical) {
  std::printf("%-28s %10.3fs %10.3fs %8.2fx   %s\n", name, serial, parallel,
              serial / parallel, identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  int n = 63;
  int search_len = 16;
  int cert_len = 18;
  std::uint64_t trials = 20000;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    const int value = std::atoi(argv[i + 1]);
    if (flag == "--n") n = value;
    else if (flag == "--max-len") search_len = value;
    else if (flag == "--l") cert_len = value;
    else if (flag == "--trials") trials = static_cast<std::uint64_t>(value);
  }
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both columns run serially\n");
#endif
  std::printf("n=%d search max_len=%d certificate l=%d trials=%llu\n\n", n,
              search_len, cert_len, static_cast<unsigned long long>(trials));
  std::printf("%-28s %11s %11s %9s\n", "kernel", "serial", "openmp", "speedup");

  const ChannelFamilyParam param(n);
  {
    SearchResult rs, rp;
    const double ts = time_of([&] {
      rs = minimal_sync_word(param, search_len, kSyncTol, Exec::serial);
    });
    const double tp = time_of([&] {
      rp = minimal_sync_word(param, search_len, kSyncTol, Exec::parallel);
    });
    report("minimal_sync_word", ts, tp,
           rs.word == rp.word && rs.words_checked == rp.words_checked);
  }
  {
    NoSyncCertificate cs, cp;
    const double ts =
        time_of([&] { cs = no_sync_certificate(n, cert_len, Exec::serial); });
    const double tp =
        time_of([&] { cp = no_sync_certificate(n, cert_len, Exec::parallel); });
    report("no_sync_certificate", ts, tp,
           cs.min_observed_distance == cp.min_observed_distance &&
               cs.words_checked == cp.words_checked);
  }
  {
    const RandomSource src(20250101);
    CheckReport rs, rp;
    const double ts =
        time_of([&] { rs = check_contraction(trials, src, Exec::serial); });
    const double tp =
        time_of([&] { rp = check_contraction(trials, src, Exec::parallel); });
    report("check_contraction", ts, tp, rs.to_json() == rp.to_json());
  }
  {
    const RandomSource src(20250101);
    CheckReport rs, rp;
    const double ts = time_of(
        [&] { rs = check_power_bound(n, 32, trials / 4, src, Exec::serial); });
    const double tp = time_of(
        [&] { rp = check_power_bound(n, 32, trials / 4, src, Exec::parallel); });
    report("check_power_bound", ts, tp, rs.to_json() == rp.to_json());
  }
  return 0;
}
