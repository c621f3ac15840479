#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// End-to-end checks of the installed binary. CMake points TIMEHASH_BIN at
// the freshly built executable; without it (manual runs of the test binary)
// the cases degrade to no-ops with a message.

namespace {

namespace fs = std::filesystem;

const char* cli_bin() { return std::getenv("TIMEHASH_BIN"); }

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::current_path() / "cli_test_work";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args) {
  const fs::path out_path = work_dir() / "stdout.txt";
  const fs::path err_path = work_dir() / "stderr.txt";
  const std::string cmd = std::string("\"") + cli_bin() + "\" " + args + " 1>" +
                          out_path.string() + " 2>" + err_path.string();
  const int raw = std::system(cmd.c_str());
  RunResult r;
  if (raw != -1 && WIFEXITED(raw)) r.code = WEXITSTATUS(raw);
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

#define REQUIRE_CLI()                                         \
  do {                                                        \
    if (cli_bin() == nullptr) {                               \
      MESSAGE("TIMEHASH_BIN not set; skipping CLI test");     \
      return;                                                 \
    }                                                         \
  } while (0)

}  // namespace

TEST_CASE("cli: usage errors exit 2, help exits 0") {
  REQUIRE_CLI();
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("frobnicate").code == 2);
  CHECK(run_cli("keys --from 1140").code == 2);  // --to is required
  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("keys --help").code == 0);
  CHECK(run_cli("verify").code == 2);  // needs --exhaustive or --samples
  CHECK(run_cli("keys --from 0900 --to 1700 --hierarchy 60,45").code == 2);
  CHECK(run_cli("keys --from 9am --to 1700").code == 2);
}

TEST_CASE("cli: keys emits the sorted cover of a range") {
  REQUIRE_CLI();
  const RunResult r = run_cli("keys --from 1140 --to 2100");
  CHECK(r.code == 0);
  CHECK(r.out == "08113040\n081145\n12\n16\n2020\n");

  const RunResult empty = run_cli("keys --from 1200 --to 1200");
  CHECK(empty.code == 0);
  CHECK(empty.out.empty());

  // past-midnight ranges wrap into two spans
  const RunResult wrap = run_cli("keys --from 2200 --to 0200");
  CHECK(wrap.code == 0);
  CHECK(wrap.out == "0000\n0001\n2022\n2023\n");

  const RunResult tagged = run_cli("keys --from 1140 --to 2100 --prefix mon");
  CHECK(tagged.code == 0);
  CHECK(tagged.out == "mon08113040\nmon081145\nmon12\nmon16\nmon2020\n");
}

TEST_CASE("cli: query prints one key per level, coarsest first") {
  REQUIRE_CLI();
  const RunResult r = run_cli("query --at 1430");
  CHECK(r.code == 0);
  CHECK(r.out == "12\n1214\n121430\n12143030\n1214303030\n");

  const RunResult tagged = run_cli("query --at 1430 --prefix fri:");
  CHECK(tagged.code == 0);
  CHECK(tagged.out ==
        "fri:12\nfri:1214\nfri:121430\nfri:12143030\nfri:1214303030\n");

  // 2400 marks range ends and is never a queryable minute
  const RunResult midnight = run_cli("query --at 2400");
  CHECK(midnight.code == 2);
  CHECK(midnight.err.find("0000-2359") != std::string::npos);
}

TEST_CASE("cli: serve-batch answers one line per query") {
  REQUIRE_CLI();
  const fs::path pois = work_dir() / "pois.jsonl";
  const fs::path queries = work_dir() / "queries.txt";
  spit(pois, "{\"id\":\"cafe\",\"ranges\":[[\"1140\",\"2100\"]]}\n");
  spit(queries, "1430\n2100\n0230\n");

  const RunResult r = run_cli("serve-batch --index " + pois.string() +
                              " --queries " + queries.string());
  CHECK(r.code == 0);
  CHECK(r.out == "cafe\n\n\n");  // hit, closed at 21:00, closed at night

  spit(pois, "");  // empty corpus still answers every query
  const RunResult none = run_cli("serve-batch --index " + pois.string() +
                                 " --queries " + queries.string());
  CHECK(none.code == 0);
  CHECK(none.out == "\n\n\n");

  spit(pois, "{\"id\":\"cafe\",\"ranges\":[[\"1140\",\"2100\"]]}\n");
  spit(queries, "1430\nnoon\n");
  const RunResult bad_query = run_cli("serve-batch --index " + pois.string() +
                                      " --queries " + queries.string());
  CHECK(bad_query.code == 2);
  CHECK(bad_query.err.find("line 2") != std::string::npos);

  spit(pois, "{broken\n");
  const RunResult bad_pois = run_cli("serve-batch --index " + pois.string() +
                                     " --queries " + queries.string());
  CHECK(bad_pois.code == 2);

  const RunResult missing = run_cli("serve-batch --index " + pois.string() +
                                    " --queries " +
                                    (work_dir() / "absent.txt").string());
  CHECK(missing.code == 2);
}

TEST_CASE("cli: gen is byte-deterministic per seed") {
  REQUIRE_CLI();
  const fs::path a = work_dir() / "gen_a.jsonl";
  const fs::path b = work_dir() / "gen_b.jsonl";
  CHECK(run_cli("gen --n 200 --seed 7 --out " + a.string()).code == 0);
  CHECK(run_cli("gen --n 200 --seed 7 --out " + b.string()).code == 0);
  const std::string first = slurp(a);
  CHECK(first == slurp(b));
  CHECK(first.find("\"id\":\"00000000\"") != std::string::npos);

  CHECK(run_cli("gen --n 200 --seed 8 --out " + b.string()).code == 0);
  CHECK(first != slurp(b));

  // config files reshape the distribution
  const fs::path cfg = work_dir() / "allday.cfg";
  spit(cfg, "all_day_fraction = 1.0\n");
  const RunResult allday =
      run_cli("gen --n 3 --seed 7 --config " + cfg.string());
  CHECK(allday.code == 0);
  CHECK(allday.out ==
        "{\"id\":\"00000000\",\"ranges\":[[\"0000\",\"2400\"]]}\n"
        "{\"id\":\"00000001\",\"ranges\":[[\"0000\",\"2400\"]]}\n"
        "{\"id\":\"00000002\",\"ranges\":[[\"0000\",\"2400\"]]}\n");

  spit(cfg, "gravity = 9.8\n");
  CHECK(run_cli("gen --n 3 --config " + cfg.string()).code == 2);
}

TEST_CASE("cli: sampled verify reports zero mismatches") {
  REQUIRE_CLI();
  const RunResult r = run_cli("verify --samples 300 --seed 5");
  CHECK(r.code == 0);
  CHECK(r.out.find("sampled:") != std::string::npos);
  CHECK(r.out.find(" 0 mismatches") != std::string::npos);
}

TEST_CASE("cli: bench reports write CSV or JSON") {
  REQUIRE_CLI();
  const fs::path csv = work_dir() / "sweep.csv";
  CHECK(run_cli("bench sweep --n 300 --out " + csv.string()).code == 0);
  const std::string text = slurp(csv);
  CHECK(text.find("config,hierarchy,levels,total_terms,ratio_pct\n") !=
        std::string::npos);
  CHECK(text.find("\"120,60,30,15,5\"") != std::string::npos);

  const RunResult json = run_cli("bench sweep --n 300 --json");
  CHECK(json.code == 0);
  CHECK(!json.out.empty());
  CHECK(json.out.front() == '{');
}
