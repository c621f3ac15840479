// Acceptance gate: one PASS/FAIL line per criterion, details indented.
// Exit code = number of failed criteria. argv[1] names the CLI binary
// (criterion 8), argv[2] a scratch directory for its outputs.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "timehash/bench.hpp"

using namespace timehash;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

struct Criterion {
  int number;
  std::string title;
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& note) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "ok   " : "MISS ") + note);
  }
};

void print_criterion(const Criterion& c) {
  std::cout << (c.pass ? "PASS" : "FAIL") << " criterion " << c.number << ": "
            << c.title << "\n";
  for (const std::string& note : c.notes) std::cout << "    " << note << "\n";
  std::cout.flush();
}

std::set<std::string> term_set(TimeRange r) {
  std::set<std::string> out;
  for (const TimehashKey& key : index_terms(r, Hierarchy())) out.insert(key.text);
  return out;
}

std::string join(const std::set<std::string>& terms) {
  std::string out;
  for (const std::string& t : terms) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

Criterion criterion_worked_keys() {
  Criterion c{1, "worked key sets"};
  const struct {
    TimeRange range;
    std::set<std::string> expect;
  } cases[] = {
      {{700, 1260}, {"08113040", "081145", "12", "16", "2020"}},
      {{480, 1260}, {"08", "12", "16", "2020"}},
      {{720, 960}, {"12"}},
      {{720, 780}, {"1212"}},
  };
  for (const auto& tc : cases) {
    const std::set<std::string> got = term_set(tc.range);
    c.check(got == tc.expect,
            "[" + format_hhmm(tc.range.start) + "," + format_hhmm(tc.range.end) +
                ") -> {" + join(got) + "}" +
                (got == tc.expect ? "" : " expected {" + join(tc.expect) + "}"));
  }
  return c;
}

Criterion criterion_oracle() {
  Criterion c{2, "oracle equivalence"};
  const VerifyReport full = verify_exhaustive();
  c.check(full.mismatches == 0,
          "exhaustive day: " + std::to_string(full.checks) + " checks, " +
              std::to_string(full.mismatches) + " mismatches");
  for (const std::string& d : full.details) c.notes.push_back("  " + d);

  const VerifyReport reduced = verify_reduced_day();
  c.check(reduced.mismatches == 0,
          "reduced 240-minute day (60,15,5,1): " +
              std::to_string(reduced.checks) + " checks, " +
              std::to_string(reduced.mismatches) + " mismatches");
  for (const std::string& d : reduced.details) c.notes.push_back("  " + d);

  const double total = full.seconds + reduced.seconds;
  c.check(total < 120.0, "runtime " + fmt(total, 1) + " s (budget 120 s)");
  return c;
}

Criterion criterion_key_stats() {
  Criterion c{3, "key-count bounds and bucket statistics"};
  c.check(boundary_constant(Hierarchy()) == 24,
          "boundary constant B = " +
              std::to_string(boundary_constant(Hierarchy())) + " (reference 24)");
  c.check(max_key_bound(Hierarchy()) == 31,
          "max key bound = " + std::to_string(max_key_bound(Hierarchy())) +
              " (reference 31)");

  const auto t0 = Clock::now();
  const KeyStatsReport rep = enumerate_key_stats(Hierarchy());
  const double elapsed = seconds_since(t0);

  c.check(rep.overall.max_keys == 28,
          "empirical maximum = " + std::to_string(rep.overall.max_keys) +
              " (reference 28)");

  const struct {
    double avg;
    int min, max;
  } reference[4] = {{6.5, 1, 14}, {9.2, 1, 20}, {13.1, 2, 25}, {15.4, 4, 28}};
  for (int i = 0; i < 4; ++i) {
    const KeyStatsBucket& b = rep.buckets[static_cast<std::size_t>(i)];
    c.check(std::abs(b.avg_keys - reference[i].avg) <= 0.2,
            "bucket " + b.label + ": avg keys " + fmt(b.avg_keys) +
                " (reference " + fmt(reference[i].avg, 1) + " +/- 0.2)");
    c.check(b.min_keys == reference[i].min && b.max_keys == reference[i].max,
            "bucket " + b.label + ": key range " + std::to_string(b.min_keys) +
                "-" + std::to_string(b.max_keys) + " (reference " +
                std::to_string(reference[i].min) + "-" +
                std::to_string(reference[i].max) + ")");
  }
  c.check(elapsed < 60.0, "runtime " + fmt(elapsed, 1) + " s (budget 60 s)");
  return c;
}

Criterion criterion_ablation() {
  Criterion c{4, "level ablation vs reference deltas"};
  const AblationReport rep = ablation(Hierarchy(), default_ablation_variants());
  auto row = [&](const std::string& label) -> const AblationRow& {
    for (const AblationRow& r : rep.rows) {
      if (r.label == label) return r;
    }
    throw std::logic_error("missing ablation row " + label);
  };

  c.check(std::abs(rep.base_avg - 5.8) <= 0.1,
          "full hierarchy avg " + fmt(rep.base_avg) + " (reference 5.8 +/- 0.1)");

  const AblationRow& rm4h = row("remove 4h");
  c.check(std::abs(rm4h.avg_keys - 8.8) <= 0.1,
          "remove 4h avg " + fmt(rm4h.avg_keys) + " (reference 8.8 +/- 0.1)");
  c.check(std::abs(rm4h.delta_pct - 51.0) <= 3.0,
          "remove 4h delta " + fmt(rm4h.delta_pct, 1) +
              "% (reference +51% +/- 3pp)");

  const AblationRow& lvl3 = row("3-level");
  c.check(std::abs(lvl3.avg_keys - 18.3) <= 0.2,
          "3-level avg " + fmt(lvl3.avg_keys) + " (reference 18.3 +/- 0.2)");
  c.check(std::abs(lvl3.delta_pct - 214.0) <= 5.0,
          "3-level delta " + fmt(lvl3.delta_pct, 1) +
              "% (reference +214% +/- 5pp)");

  const AblationRow& lvl6 = row("6-level +30m");
  c.check(std::abs(lvl6.delta_pct - (-5.0)) <= 2.0,
          "6-level (+30m) delta " + fmt(lvl6.delta_pct, 1) +
              "% (reference -5% +/- 2pp)");
  return c;
}

Criterion criterion_index_size(const std::vector<PoiRecord>& pois) {
  Criterion c{5, "index size and end-to-end ordering at 100K"};
  const std::vector<Strategy> strategies{Strategy::timehash, Strategy::minute1,
                                         Strategy::minute5, Strategy::hour1};
  const std::vector<MinuteOfDay> queries = sample_queries(1000, 7);
  const IndexSizeReport size = index_size_comparison(pois, strategies, queries);
  auto size_row = [&](const std::string& name) -> const IndexSizeRow& {
    for (const IndexSizeRow& r : size.rows) {
      if (r.strategy == name) return r;
    }
    throw std::logic_error("missing index-size row " + name);
  };

  const IndexSizeRow& th = size_row("timehash");
  const IndexSizeRow& m1 = size_row("minute1");
  c.check(std::abs(th.terms_per_doc - 5.6) <= 0.2,
          "timehash terms/doc " + fmt(th.terms_per_doc) +
              " (reference 5.6 +/- 0.2)");
  c.check(std::abs(m1.terms_per_doc - 609.7) <= 609.7 * 0.02,
          "minute1 terms/doc " + fmt(m1.terms_per_doc, 1) +
              " (calibration reference 609.7 +/- 2%)");
  c.check(th.reduction_pct >= 98.8,
          "reduction " + fmt(th.reduction_pct, 2) + "% (needs >= 98.8%)");
  c.check(queries.size() >= 100 && th.precision == 1.0 && th.recall == 1.0,
          "timehash precision " + fmt(th.precision, 3) + " recall " +
              fmt(th.recall, 3) + " over " + std::to_string(queries.size()) +
              " queries (needs exactly 1.000)");
  c.check(size_row("hour1").precision < 1.0,
          "hour1 precision " + fmt(size_row("hour1").precision, 3) +
              " (needs < 1.000)");

  const E2eReport e2e = end_to_end(pois, strategies, 1000, 7);
  const E2eRow* scope = nullptr;
  for (const E2eRow& r : e2e.rows) {
    if (r.strategy == "scope") scope = &r;
  }
  double worst_index_p50 = 0.0;
  std::string worst_name;
  double th_build = 0.0, m1_build = 0.0;
  for (const E2eRow& r : e2e.rows) {
    if (r.strategy == "scope") continue;
    if (r.p50_us > worst_index_p50) {
      worst_index_p50 = r.p50_us;
      worst_name = r.strategy;
    }
    if (r.strategy == "timehash") th_build = r.build_ms;
    if (r.strategy == "minute1") m1_build = r.build_ms;
  }
  c.check(scope != nullptr && scope->p50_us > worst_index_p50,
          "scope P50 " + fmt(scope ? scope->p50_us : 0.0, 0) +
              " us > slowest index P50 " + fmt(worst_index_p50, 0) + " us (" +
              worst_name + ")");
  c.check(th_build > 0.0 && m1_build >= 10.0 * th_build,
          "build time: minute1 " + fmt(m1_build, 0) + " ms vs timehash " +
              fmt(th_build, 0) + " ms (needs >= 10x)");
  return c;
}

Criterion criterion_scalability() {
  Criterion c{6, "scalability 100K to 1M"};
  DistributionConfig config;
  config.seed = 42;
  const ScaleReport rep =
      scalability({100000, 250000, 500000, 1000000}, config, 1000, 7);

  double min_terms = rep.rows.front().terms_per_doc;
  double max_terms = min_terms;
  std::size_t max_unique = 0;
  for (const ScaleRow& row : rep.rows) {
    min_terms = std::min(min_terms, row.terms_per_doc);
    max_terms = std::max(max_terms, row.terms_per_doc);
    max_unique = std::max(max_unique, row.unique_terms);
    c.notes.push_back("     n=" + std::to_string(row.n) + ": " +
                      fmt(row.terms_per_doc, 3) + " terms/doc, " +
                      std::to_string(row.unique_terms) + " unique, build " +
                      fmt(row.build_ms, 0) + " ms");
  }
  c.check(max_terms - min_terms <= 0.01 * max_terms,
          "terms/doc spread " + fmt(min_terms, 3) + " - " + fmt(max_terms, 3) +
              " (within 1%)");

  const ScaleRow& base = rep.rows.front();
  bool linear = true;
  double worst_factor = 1.0;
  for (const ScaleRow& row : rep.rows) {
    const double extrapolated = base.build_ms * static_cast<double>(row.n) /
                                static_cast<double>(base.n);
    const double factor = extrapolated > 0.0 ? row.build_ms / extrapolated : 0.0;
    worst_factor = std::max(worst_factor, factor);
    if (row.build_ms > 1.5 * extrapolated) linear = false;
  }
  c.check(linear, "build time within 1.5x of linear (worst factor " +
                      fmt(worst_factor) + "x)");
  c.check(max_unique <= 300, "unique keys <= 300 at every scale (max " +
                                 std::to_string(max_unique) + ")");
  return c;
}

Criterion criterion_sweep(const std::vector<PoiRecord>& pois) {
  Criterion c{7, "hierarchy sweep ordering"};
  const SweepReport rep = hierarchy_sweep(default_sweep_configs(), pois);
  auto ratio = [&](const std::string& hierarchy) {
    for (const SweepRow& r : rep.rows) {
      if (r.hierarchy == hierarchy) return r.ratio_pct;
    }
    throw std::logic_error("missing sweep row " + hierarchy);
  };
  const double r2 = ratio("60,5");
  const double r3 = ratio("60,30,5");
  const double r3b = ratio("120,60,5");
  const double r4 = ratio("120,60,30,5");
  const double r5 = ratio("120,60,30,15,5");
  c.notes.push_back("     ratios vs 5-minute baseline: " + fmt(r2) + " > " +
                    fmt(r3) + " > " + fmt(r3b) + " > " + fmt(r4) + " >= " +
                    fmt(r5) + " (%)");
  c.check(r2 > r3 && r3 > r3b && r3b > r4 && r4 >= r5,
          "monotone ordering (60,5) > (60,30,5) > (120,60,5) > (120,60,30,5) "
          ">= (120,60,30,15,5)");
  c.check(r2 >= 8.0 && r2 <= 13.0,
          "(60,5) ratio " + fmt(r2) + "% within 8-13%");
  return c;
}

int run_cli(const std::string& bin, const std::string& args,
            const fs::path& stdout_path) {
  const std::string cmd =
      "\"" + bin + "\" " + args + " 1>" + stdout_path.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  if (raw == -1 || !WIFEXITED(raw)) return -1;
  return WEXITSTATUS(raw);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Criterion criterion_determinism(const std::string& bin, const fs::path& work) {
  Criterion c{8, "CLI determinism"};
  if (bin.empty()) {
    c.check(false, "CLI binary path not provided (argv[1])");
    return c;
  }
  fs::create_directories(work);

  const fs::path gen_a = work / "gen_a.jsonl";
  const fs::path gen_b = work / "gen_b.jsonl";
  const int ga = run_cli(bin, "gen --seed 42 --n 100000 --out " + gen_a.string(),
                         work / "gen_a.log");
  const int gb = run_cli(bin, "gen --seed 42 --n 100000 --out " + gen_b.string(),
                         work / "gen_b.log");
  const bool gen_same = ga == 0 && gb == 0 && slurp(gen_a) == slurp(gen_b) &&
                        !slurp(gen_a).empty();
  c.check(gen_same, "gen --seed 42 --n 100000 twice: " +
                        std::string(gen_same ? "byte-identical"
                                             : "outputs differ or failed"));

  const fs::path keys_a = work / "keys_a.txt";
  const fs::path keys_b = work / "keys_b.txt";
  const int ka = run_cli(bin, "keys --from 1140 --to 2100", keys_a);
  const int kb = run_cli(bin, "keys --from 1140 --to 2100", keys_b);
  c.check(ka == 0 && kb == 0 && slurp(keys_a) == slurp(keys_b) &&
              slurp(keys_a) == "08113040\n081145\n12\n16\n2020\n",
          "keys --from 1140 --to 2100: byte-stable worked output");

  const fs::path query_a = work / "query_a.txt";
  const fs::path query_b = work / "query_b.txt";
  const int qa = run_cli(bin, "query --at 1430", query_a);
  const int qb = run_cli(bin, "query --at 1430", query_b);
  c.check(qa == 0 && qb == 0 && slurp(query_a) == slurp(query_b) &&
              slurp(query_a) == "12\n1214\n121430\n12143030\n1214303030\n",
          "query --at 1430: byte-stable worked output");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli_bin = argc > 1 ? argv[1] : "";
  const fs::path work =
      argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "acceptance";

  std::vector<Criterion> results;
  results.push_back(criterion_worked_keys());
  print_criterion(results.back());
  results.push_back(criterion_oracle());
  print_criterion(results.back());
  results.push_back(criterion_key_stats());
  print_criterion(results.back());
  results.push_back(criterion_ablation());
  print_criterion(results.back());

  DistributionConfig config;  // defaults: seed 42, n 100000
  const std::vector<PoiRecord> pois = generate(config);
  results.push_back(criterion_index_size(pois));
  print_criterion(results.back());
  results.push_back(criterion_scalability());
  print_criterion(results.back());
  results.push_back(criterion_sweep(pois));
  print_criterion(results.back());
  results.push_back(criterion_determinism(cli_bin, work));
  print_criterion(results.back());

  int failed = 0;
  for (const Criterion& c : results) failed += c.pass ? 0 : 1;
  std::cout << (results.size() - static_cast<std::size_t>(failed)) << "/"
            << results.size() << " criteria passed\n";
  return failed;
}
