// primeclock: counter-vector prime engine, interval statistics and
// twin/cousin conjecture checks from the command line.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "primeclock/analytic.hpp"
#include "primeclock/counter_engine.hpp"
#include "primeclock/errors.hpp"
#include "primeclock/interval_stats.hpp"
#include "primeclock/io.hpp"
#include "primeclock/population_model.hpp"
#include "primeclock/verifier.hpp"

namespace fs = std::filesystem;
using namespace primeclock;

namespace {

enum ExitCode : int {
  kOk = 0,
  kCounterexample = 1,
  kUsage = 2,
  kInconsistent = 3,
  kCache = 4,
};

struct Globals {
  unsigned jobs = 1;
  std::string cache_dir;
  std::uint64_t seed = 0;  // reserved; every computation here is deterministic
  bool pretty = false;

  fs::path cache() const { return cache_dir.empty() ? io::default_cache_dir() : fs::path(cache_dir); }
};

std::ofstream open_out(const std::string& path) {
  if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::string display(double x, bool pretty) { return pretty ? io::format_pretty(x) : io::format_exact(x); }

// engine -------------------------------------------------------------------

struct EngineArgs {
  std::uint64_t max = 121;
  std::string table_out, trace_out;
};

int run_engine(const EngineArgs& a) {
  if (!a.trace_out.empty()) {
    auto out = open_out(a.trace_out);
    io::write_engine_trace(out, a.max);
  }
  const PrimeTable table = run_to(a.max);
  if (!a.table_out.empty()) {
    auto out = open_out(a.table_out);
    io::write_prime_table(out, table);
  }
  std::cout << "odd primes <= " << a.max << ": " << table.size() << " (largest " << table.back() << ")\n";
  return kOk;
}

// scan ---------------------------------------------------------------------

struct ScanArgs {
  std::size_t n_from = 3, n_to = 3;
  std::string kind = "twin,cousin";
  std::string out;
  bool resume = false;
  std::size_t chunk = 256;
};

io::ScanColumns parse_kinds(const std::string& kinds) {
  io::ScanColumns c{false, false, false};
  std::istringstream in(kinds);
  std::string k;
  while (std::getline(in, k, ',')) {
    if (k == "twin")
      c.twin = true;
    else if (k == "cousin")
      c.cousin = true;
    else
      throw CLI::ValidationError("--kind", "unknown kind '" + k + "'");
  }
  return c;
}

int run_scan_cmd(const ScanArgs& a, const Globals& g) {
  io::ScanOptions opts;
  opts.n_from = a.n_from;
  opts.n_to = a.n_to;
  opts.columns = parse_kinds(a.kind);
  opts.columns.pretty = g.pretty;
  opts.jobs = g.jobs;
  opts.resume = a.resume;
  opts.chunk = a.chunk;
  const PrimeSequence primes = PrimeSequence::first(a.n_to);
  const std::size_t computed = io::run_scan(primes, a.out, opts);
  std::cerr << "scanned " << computed << " intervals into " << a.out << "\n";
  return kOk;
}

// population ---------------------------------------------------------------

struct PopulationArgs {
  std::size_t length = 4;
  std::size_t interval_n = 0;
  bool ks = false;
  std::string ks_variant = "mass-vectors";
  std::string hist_out;
  bool enumerate = false;
  std::uint64_t cap = kDefaultEnumerationCap;
};

int run_population(const PopulationArgs& a, const Globals& g) {
  const std::size_t n = a.interval_n ? a.interval_n : a.length + 1;
  if (n != a.length + 1) throw CLI::ValidationError("--interval-n", "tuples of I_{n-1} have length n-1");
  const PrimeSequence primes = PrimeSequence::first(n);
  const DigitDistribution reference = analytic_distribution(a.length);
  const DigitDistribution sample = interval_distribution(primes, n);
  std::cout << "length " << a.length << ", interval [" << primes.p(n - 1) << "^2, " << primes.p(n)
            << "^2), " << sample.observations << " digit observations\n";
  std::cout << "total variation vs population: " << display(total_variation(sample, reference), g.pretty) << "\n";

  if (a.enumerate) {
    const PopulationSpec spec = PopulationSpec::for_length(a.length);
    const PopulationSummary s = enumerate_population(spec, {}, a.cap);
    std::cout << "population period " << s.period << ", distinct " << s.distinct << ", avoid{0,1} "
              << s.avoid_01 << ", avoid{0,2} " << s.avoid_02 << " (exact " << event_count(spec.moduli) << ")\n";
  }
  if (a.ks) {
    const KsVariant variant = a.ks_variant == "one-sample" ? KsVariant::one_sample : KsVariant::mass_vectors;
    const KsResult r = ks_test(sample, reference, variant);
    std::cout << "KS (" << a.ks_variant << "): D=" << display(r.statistic, g.pretty)
              << " p=" << display(r.p_value, g.pretty) << "\n";
  }
  if (!a.hist_out.empty()) {
    auto out = open_out(a.hist_out);
    io::write_histogram(out, sample, reference);
  }
  return kOk;
}

// estimate -----------------------------------------------------------------

struct EstimateArgs {
  std::size_t n = 1000;
  std::optional<std::uint64_t> gap;
  bool json = false;
};

int run_estimate(const EstimateArgs& a, const Globals& g) {
  const PrimeSequence primes = PrimeSequence::first(a.n);
  const io::EstimateRecord r = io::estimate(primes, a.n, a.gap);
  if (a.json) {
    std::cout << io::to_json(r);
    return kOk;
  }
  std::cout << "n=" << r.n << " p_n=" << primes.p(a.n) << "\n"
            << "c2_partial    " << display(r.c2_partial, g.pretty) << "\n"
            << "prod1         " << display(r.prod1, g.pretty) << "\n"
            << "prod2         " << display(r.prod2, g.pretty) << "\n"
            << "mertens_ratio " << display(r.mertens_ratio, g.pretty) << "\n"
            << "en            " << display(r.en, g.pretty) << "\n"
            << "qn            " << display(r.qn, g.pretty) << "\n"
            << "log10_decay   " << display(r.log10_decay, g.pretty) << "\n";
  if (r.branch_log10_decay)
    std::cout << "branch(gap=" << *r.gap << ") log10_decay " << display(*r.branch_log10_decay, g.pretty) << "\n";
  return kOk;
}

// verify -------------------------------------------------------------------

struct VerifyArgs {
  std::size_t n_min = 3, n_max = 5000;
  std::string witnesses;
  bool full_count = false;
  std::uint64_t cross_validate_limit = 0;
};

int run_verify(const VerifyArgs& a, const Globals& g) {
  if (a.cross_validate_limit) {
    const CrossValidationReport rep = cross_validate(a.cross_validate_limit);
    std::cout << "cross-validation to " << rep.limit << ": " << rep.primes_compared << " primes, "
              << rep.twin_leads << " twin leads, " << rep.cousin_leads << " cousin leads, "
              << rep.mismatch_total << " mismatches\n";
    for (const auto& m : rep.mismatches)
      std::cout << "  MISMATCH i=" << m.i << " " << m.property << " engine=" << m.engine << " oracle=" << m.oracle
                << " tuple=(" << m.state << ")\n";
    if (!rep.ok()) return kInconsistent;
  }
  const PrimeSequence primes = PrimeSequence::first(a.n_max);
  const auto ws = verify_conjectures(primes, a.n_min, a.n_max, !a.full_count, g.jobs);
  std::size_t bad = 0;
  for (const auto& w : ws)
    if (w.status != WitnessStatus::both_found) {
      ++bad;
      std::cout << "COUNTEREXAMPLE " << io::witness_row(w) << "\n";
    }
  if (!a.witnesses.empty()) {
    auto out = open_out(a.witnesses);
    out << io::fingerprint("verify witnesses") << '\n' << io::witness_header() << '\n';
    for (const auto& w : ws) out << io::witness_row(w) << '\n';
  }
  std::cout << "n in [" << a.n_min << ", " << a.n_max << "]: " << ws.size() - bad << " both_found, " << bad
            << " counterexamples\n";
  return bad ? kCounterexample : kOk;
}

// cache / figure -----------------------------------------------------------

struct CacheArgs {
  std::size_t n_from = 3, n_to = 3000;
  std::string file;
};

int run_cache_build(const CacheArgs& a, const Globals& g) {
  const PrimeSequence primes = PrimeSequence::first(a.n_to);
  const auto records = scan_intervals(primes, a.n_from, a.n_to, ScanMode::oracle, kDefaultDigitCap, g.jobs);
  const fs::path path = a.file.empty() ? io::interval_cache_path(g.cache()) : fs::path(a.file);
  io::write_cache_file(path, records);
  std::cout << "wrote " << records.size() << " records to " << path.string() << "\n";
  return kOk;
}

int run_cache_check(const CacheArgs& a, const Globals& g) {
  const fs::path path = a.file.empty() ? io::interval_cache_path(g.cache()) : fs::path(a.file);
  const auto records = io::read_cache_file(path);
  std::cout << path.string() << ": " << records.size() << " records, checksum ok";
  if (!records.empty()) std::cout << ", n " << records.front().n << ".." << records.back().n;
  std::cout << "\n";
  return kOk;
}

struct FigureArgs {
  std::string id;
  std::size_t n_from = 3, n_to = 1000;
  std::size_t length = 4;
  std::size_t burn_in = kDefaultBurnIn;
  std::string decay_mode = "asymptotic";
  std::string out;
  bool compute = false;
};

std::vector<IntervalRecord> load_range(const FigureArgs& a, const Globals& g) {
  const fs::path path = io::interval_cache_path(g.cache());
  if (fs::exists(path)) {
    const auto all = io::read_cache_file(path);
    if (!all.empty() && all.front().n <= a.n_from && all.back().n >= a.n_to)
      return {all.begin() + static_cast<std::ptrdiff_t>(a.n_from - all.front().n),
              all.begin() + static_cast<std::ptrdiff_t>(a.n_to - all.front().n + 1)};
  }
  if (!a.compute)
    throw CacheError("no cached intervals cover n " + std::to_string(a.n_from) + ".." + std::to_string(a.n_to) +
                     " in " + path.string() + "; run `primeclock cache build --n-from " + std::to_string(a.n_from) +
                     " --n-to " + std::to_string(a.n_to) + "` or pass --compute");
  const PrimeSequence primes = PrimeSequence::first(a.n_to);
  return scan_intervals(primes, a.n_from, a.n_to, ScanMode::oracle, 0, g.jobs);
}

int run_figure(const FigureArgs& a, const Globals& g) {
  const auto id = io::parse_figure_id(a.id);
  if (!id) throw CLI::ValidationError("--id", "unknown figure '" + a.id + "'");
  io::FigureDataset fig;
  switch (*id) {
    case io::FigureId::fig1_hist:
      fig = io::figure_hist(PrimeSequence::first(a.length + 1), a.length);
      break;
    case io::FigureId::fig2_theta:
      fig = io::figure_theta(load_range(a, g), a.burn_in);
      break;
    case io::FigureId::fig2_decay:
      fig = io::figure_decay(load_range(a, g),
                             a.decay_mode == "empirical" ? io::DecayMode::empirical : io::DecayMode::asymptotic);
      break;
  }
  if (a.out.empty()) {
    io::write_figure(std::cout, fig);
  } else {
    auto out = open_out(a.out);
    io::write_figure(out, fig);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"primeclock: counter-vector primes, interval statistics and twin/cousin checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--cache-dir", g.cache_dir, "Cache directory (env PRIMECLOCK_CACHE)");
  app.add_option("--seed", g.seed, "Reserved; all computations are deterministic");
  app.add_flag("--pretty", g.pretty, "Round displayed values to 6 decimals");

  EngineArgs ea;
  auto* engine = app.add_subcommand("engine", "Run the counter engine");
  engine->add_option("--max", ea.max, "Largest odd index to visit")->required()->check(CLI::Range(std::uint64_t{3}, kMaxEngineIndex));
  engine->add_option("--table-out", ea.table_out, "CSV of detected primes");
  engine->add_option("--trace-out", ea.trace_out, "CSV trace: i,kind,tuple");

  ScanArgs sa;
  auto* scan = app.add_subcommand("scan", "Interval statistics for n in [n-from, n-to]");
  scan->add_option("--n-from", sa.n_from)->required()->check(CLI::Range(std::size_t{3}, std::size_t{1} << 32));
  scan->add_option("--n-to", sa.n_to)->required()->check(CLI::Range(std::size_t{3}, std::size_t{1} << 32));
  scan->add_option("--kind", sa.kind, "twin,cousin");
  scan->add_option("--out", sa.out)->required();
  scan->add_flag("--resume", sa.resume, "Continue from the sidecar manifest");
  scan->add_option("--chunk", sa.chunk, "Intervals per checkpoint")->check(CLI::PositiveNumber);

  PopulationArgs pa;
  auto* pop = app.add_subcommand("population", "Digit distribution of an interval vs the full population");
  pop->add_option("--length", pa.length)->required()->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  pop->add_option("--interval-n", pa.interval_n, "Interval index (default length+1)");
  pop->add_flag("--ks", pa.ks, "Kolmogorov-Smirnov p-value");
  pop->add_option("--ks-variant", pa.ks_variant)->check(CLI::IsMember({"mass-vectors", "one-sample"}));
  pop->add_option("--hist-out", pa.hist_out, "CSV: digit,sample_mass,reference_mass");
  pop->add_flag("--enumerate", pa.enumerate, "Walk the full population period");
  pop->add_option("--cap", pa.cap, "Enumeration cap");

  EstimateArgs sta;
  auto* est = app.add_subcommand("estimate", "Products, Li2 error term and q_n at index n");
  est->add_option("--n", sta.n)->required()->check(CLI::Range(std::size_t{2}, std::size_t{50'000'000}));
  est->add_option("--gap", sta.gap, "Also evaluate the branch curve for this prime gap");
  est->add_flag("--json", sta.json);

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "Check twin/cousin witnesses in every interval");
  ver->add_option("--n-max", va.n_max)->required()->check(CLI::Range(std::size_t{3}, std::size_t{1} << 28));
  ver->add_option("--n-min", va.n_min)->check(CLI::Range(std::size_t{3}, std::size_t{1} << 28));
  ver->add_option("--witnesses", va.witnesses, "Witness CSV");
  ver->add_flag("--full-count", va.full_count, "Sieve whole intervals instead of exiting early");
  ver->add_option("--cross-validate", va.cross_validate_limit, "Also compare engine and sieve up to this bound");

  FigureArgs fa;
  auto* fig = app.add_subcommand("figure", "Emit figure data as CSV");
  fig->add_option("--id", fa.id, "fig1_hist | fig2_theta | fig2_decay")->required();
  fig->add_option("--n-from", fa.n_from);
  fig->add_option("--n-to", fa.n_to);
  fig->add_option("--length", fa.length, "Tuple length for fig1_hist");
  fig->add_option("--burn-in", fa.burn_in);
  fig->add_option("--decay-mode", fa.decay_mode)->check(CLI::IsMember({"asymptotic", "empirical"}));
  fig->add_option("--out", fa.out);
  fig->add_flag("--compute", fa.compute, "Scan instead of requiring a cache");

  CacheArgs ca;
  auto* cache = app.add_subcommand("cache", "Build or check the interval record cache");
  cache->require_subcommand(1);
  auto* build = cache->add_subcommand("build", "Scan and cache interval records");
  build->add_option("--n-from", ca.n_from);
  build->add_option("--n-to", ca.n_to);
  build->add_option("--file", ca.file);
  auto* check = cache->add_subcommand("check", "Validate a cache file");
  check->add_option("--file", ca.file);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*engine) return run_engine(ea);
    if (*scan) return run_scan_cmd(sa, g);
    if (*pop) return run_population(pa, g);
    if (*est) return run_estimate(sta, g);
    if (*ver) return run_verify(va, g);
    if (*fig) return run_figure(fa, g);
    if (*build) return run_cache_build(ca, g);
    if (*check) return run_cache_check(ca, g);
  } catch (const CacheError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCache;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
