#include "primeclock/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "primeclock/counter_engine.hpp"
#include "primeclock/errors.hpp"

namespace primeclock::io {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_exact(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_pretty(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string fingerprint(const std::string& what) {
  return "# primeclock " + what + " schema_version=" + std::to_string(kSchemaVersion);
}

void write_engine_trace(std::ostream& out, std::uint64_t limit) {
  out << fingerprint("engine trace") << '\n' << "i,kind,tuple\n";
  run_to(limit, [&](std::uint64_t i, std::span<const std::uint64_t> digits, const StepOutcome& o) {
    out << i << ',' << to_string(o.kind) << ',' << join_digits(digits) << '\n';
  });
}

void write_prime_table(std::ostream& out, const PrimeTable& table) {
  out << fingerprint("engine table") << '\n' << "index,prime\n";
  for (std::size_t k = 0; k < table.size(); ++k) out << k + 1 << ',' << table[k] << '\n';
}

// --- scan ----------------------------------------------------------------

std::string scan_header() {
  return "n,p_lo,p_hi,t_n,twin_count,cousin_count,q_twin,q_cousin,theta_twin,theta_cousin";
}

std::string scan_row(const IntervalRecord& rec, const ScanColumns& cols) {
  auto fmt = [&](double x) { return cols.pretty ? format_pretty(x) : format_exact(x); };
  std::ostringstream s;
  s << rec.n << ',' << rec.p_lo << ',' << rec.p_hi << ',' << rec.t_n << ',';
  if (cols.twin) s << rec.twin_count;
  s << ',';
  if (cols.cousin) s << rec.cousin_count;
  s << ',';
  if (cols.twin) s << fmt(rec.q_twin);
  s << ',';
  if (cols.cousin) s << fmt(rec.q_cousin);
  s << ',';
  if (cols.twin) s << fmt(rec.theta_twin);
  s << ',';
  if (cols.cousin) s << fmt(rec.theta_cousin);
  return s.str();
}

std::string ScanManifest::to_json() const {
  json j = {{"schema_version", schema_version},
            {"n_from", n_from},
            {"n_to", n_to},
            {"completed_through", completed_through},
            {"kinds", kinds}};
  return j.dump(2) + "\n";
}

ScanManifest ScanManifest::from_json(const std::string& text) {
  ScanManifest m;
  try {
    const json j = json::parse(text);
    m.schema_version = j.at("schema_version").get<int>();
    m.n_from = j.at("n_from").get<std::size_t>();
    m.n_to = j.at("n_to").get<std::size_t>();
    m.completed_through = j.at("completed_through").get<std::size_t>();
    m.kinds = j.at("kinds").get<std::string>();
  } catch (const json::exception& e) {
    throw CacheError(std::string("scan manifest unreadable: ") + e.what());
  }
  if (m.schema_version != kSchemaVersion)
    throw CacheError("scan manifest schema_version " + std::to_string(m.schema_version) + ", expected " +
                     std::to_string(kSchemaVersion) + "; rerun the scan without --resume");
  return m;
}

fs::path manifest_path(const fs::path& csv) {
  fs::path p = csv;
  p += ".manifest.json";
  return p;
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

std::string kinds_label(const ScanColumns& c) {
  if (c.twin && c.cousin) return "twin,cousin";
  return c.twin ? "twin" : "cousin";
}

}  // namespace

std::size_t run_scan(const PrimeSequence& primes, const fs::path& out_path, const ScanOptions& opts) {
  if (opts.n_from < 3 || opts.n_to < opts.n_from) throw DomainError("scan: need 3 <= n_from <= n_to");
  if (!opts.columns.twin && !opts.columns.cousin) throw DomainError("scan: no kind selected");
  const fs::path mpath = manifest_path(out_path);
  const std::string kinds = kinds_label(opts.columns);

  ScanManifest manifest;
  manifest.n_from = opts.n_from;
  manifest.n_to = opts.n_to;
  manifest.completed_through = opts.n_from - 1;
  manifest.kinds = kinds;

  std::string head = fingerprint("scan") + " n_from=" + std::to_string(opts.n_from) +
                     " n_to=" + std::to_string(opts.n_to) + " kinds=" + kinds + "\n" + scan_header() + "\n";
  std::string body;
  if (opts.resume && fs::exists(mpath) && fs::exists(out_path)) {
    const ScanManifest old = ScanManifest::from_json(read_file(mpath));
    if (old.n_from != opts.n_from || old.n_to != opts.n_to || old.kinds != kinds)
      throw CacheError("scan manifest describes a different run (n " + std::to_string(old.n_from) + ".." +
                       std::to_string(old.n_to) + ", kinds " + old.kinds + ")");
    manifest.completed_through = old.completed_through;
    // Keep completed rows; anything after them is a partial chunk.
    std::istringstream existing(read_file(out_path));
    std::string line;
    while (std::getline(existing, line)) {
      if (line.empty() || line[0] == '#' || line[0] == 'n') continue;
      const std::size_t n = std::stoul(line.substr(0, line.find(',')));
      if (n <= manifest.completed_through) body += line + "\n";
    }
  }
  write_file_atomic(out_path, head + body);

  std::ofstream out(out_path, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot append to " + out_path.string());
  std::size_t computed = 0;
  const std::size_t chunk = std::max<std::size_t>(1, opts.chunk);
  for (std::size_t a = manifest.completed_through + 1; a <= opts.n_to; a += chunk) {
    const std::size_t b = std::min(opts.n_to, a + chunk - 1);
    const auto records = scan_intervals(primes, a, b, ScanMode::oracle, 0, opts.jobs);
    for (const auto& rec : records) out << scan_row(rec, opts.columns) << '\n';
    out.flush();
    computed += records.size();
    manifest.completed_through = b;
    write_file_atomic(mpath, manifest.to_json());
  }
  if (manifest.completed_through >= opts.n_to && !fs::exists(mpath)) write_file_atomic(mpath, manifest.to_json());
  return computed;
}

// --- cache ---------------------------------------------------------------

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

namespace {

const char* kCacheHeader =
    "n,p_lo,p_hi,t_n,twin_count,cousin_count,q_twin,q_cousin,theta_twin,theta_cousin,digit_freq";

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

std::uint64_t parse_u64(const std::string& s) {
  std::size_t used = 0;
  const unsigned long long v = std::stoull(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad integer '" + s + "'");
  return v;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw std::invalid_argument("bad number '" + s + "'");
  return v;
}

}  // namespace

void write_cache(std::ostream& out, const std::vector<IntervalRecord>& records) {
  std::ostringstream body;
  body << kCacheHeader << '\n';
  for (const auto& r : records) {
    body << r.n << ',' << r.p_lo << ',' << r.p_hi << ',' << r.t_n << ',' << r.twin_count << ','
         << r.cousin_count << ',' << format_exact(r.q_twin) << ',' << format_exact(r.q_cousin) << ','
         << format_exact(r.theta_twin) << ',' << format_exact(r.theta_cousin) << ',';
    for (std::size_t k = 0; k < r.digit_freq.size(); ++k) {
      const auto& f = r.digit_freq[k];
      if (k) body << ';';
      body << f.count << ':' << f.nu << ':' << f.r;
    }
    body << '\n';
  }
  const std::string text = body.str();
  char digest[17];
  std::snprintf(digest, sizeof digest, "%016" PRIx64, fnv1a64(text));
  out << fingerprint("cache") << '\n' << "# records=" << records.size() << " fnv1a64=" << digest << '\n' << text;
}

std::vector<IntervalRecord> read_cache(std::istream& in) {
  std::string line1, line2;
  if (!std::getline(in, line1) || !std::getline(in, line2)) throw CacheError("cache: missing header (truncated?)");
  const std::string key = "schema_version=";
  const auto pos = line1.find(key);
  if (line1.rfind("# primeclock cache", 0) != 0 || pos == std::string::npos)
    throw CacheError("cache: not a primeclock cache file");
  const int version = std::atoi(line1.c_str() + pos + key.size());
  if (version != kSchemaVersion)
    throw CacheError("cache: schema_version " + std::to_string(version) + ", expected " +
                     std::to_string(kSchemaVersion) + "; rebuild it with `primeclock cache build`");

  std::size_t expected_records = 0;
  char digest[17] = {};
  if (std::sscanf(line2.c_str(), "# records=%zu fnv1a64=%16s", &expected_records, digest) != 2)
    throw CacheError("cache: malformed checksum line");
  std::ostringstream rest;
  rest << in.rdbuf();
  const std::string body = rest.str();
  char actual[17];
  std::snprintf(actual, sizeof actual, "%016" PRIx64, fnv1a64(body));
  if (std::string(actual) != digest)
    throw CacheError(std::string("cache: checksum mismatch (stored ") + digest + ", computed " + actual +
                     "); file is truncated or corrupt");

  std::vector<IntervalRecord> records;
  std::istringstream lines(body);
  std::string line;
  std::getline(lines, line);
  if (line != kCacheHeader) throw CacheError("cache: unexpected column header");
  try {
    while (std::getline(lines, line)) {
      const auto f = split(line, ',');
      if (f.size() != 11) throw CacheError("cache: row has " + std::to_string(f.size()) + " fields");
      IntervalRecord r;
      r.n = parse_u64(f[0]);
      r.p_lo = parse_u64(f[1]);
      r.p_hi = parse_u64(f[2]);
      r.t_n = parse_u64(f[3]);
      r.twin_count = parse_u64(f[4]);
      r.cousin_count = parse_u64(f[5]);
      r.q_twin = parse_double(f[6]);
      r.q_cousin = parse_double(f[7]);
      r.theta_twin = parse_double(f[8]);
      r.theta_cousin = parse_double(f[9]);
      if (!f[10].empty()) {
        for (const auto& cell : split(f[10], ';')) {
          const auto parts = split(cell, ':');
          if (parts.size() != 3) throw CacheError("cache: bad digit frequency cell");
          FrequencyCount fc;
          fc.count = parse_u64(parts[0]);
          fc.t_n = r.t_n;
          fc.nu = parse_u64(parts[1]);
          fc.r = parse_u64(parts[2]);
          r.digit_freq.push_back(fc);
        }
      }
      records.push_back(std::move(r));
    }
  } catch (const std::invalid_argument& e) {
    throw CacheError(std::string("cache: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw CacheError(std::string("cache: ") + e.what());
  }
  if (records.size() != expected_records)
    throw CacheError("cache: expected " + std::to_string(expected_records) + " records, found " +
                     std::to_string(records.size()));
  return records;
}

void write_cache_file(const fs::path& path, const std::vector<IntervalRecord>& records) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ostringstream s;
  write_cache(s, records);
  write_file_atomic(path, s.str());
}

std::vector<IntervalRecord> read_cache_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError("cache: cannot open " + path.string());
  return read_cache(in);
}

fs::path default_cache_dir() {
  if (const char* env = std::getenv("PRIMECLOCK_CACHE"); env && *env) return env;
  return ".primeclock-cache";
}

fs::path interval_cache_path(const fs::path& dir) { return dir / "intervals.cache"; }

// --- estimates -------------------------------------------------------------

EstimateRecord estimate(const PrimeSequence& primes, std::size_t n, std::optional<std::uint64_t> gap) {
  const ProductTerms t = euler_products(primes, n);
  EstimateRecord r;
  r.n = n;
  r.c2_partial = t.c2_partial;
  r.prod1 = t.prod_1;
  r.prod2 = t.prod_2;
  r.mertens_ratio = t.mertens_ratio;
  r.identity_residual = t.identity_residual;
  r.prod2_asymptotic = t.prod2_asymptotic;
  if (n >= 3) {
    r.en = en_relative_error(primes, n);
    const DecayResult d = qn_asymptotic(primes, n);
    r.qn = d.q_n;
    r.log10_decay = d.log10_decay;
  } else {
    r.en = std::numeric_limits<double>::quiet_NaN();
    r.qn = std::numeric_limits<double>::quiet_NaN();
    r.log10_decay = std::numeric_limits<double>::quiet_NaN();
  }
  if (gap) {
    r.gap = gap;
    r.branch_log10_decay = branch_curve(n, *gap).log10_decay;
  }
  return r;
}

std::string to_json(const EstimateRecord& r) {
  auto num = [](double x) -> json { return std::isfinite(x) ? json(x) : json(nullptr); };
  json j = {{"schema_version", kSchemaVersion},
            {"n", r.n},
            {"c2_partial", num(r.c2_partial)},
            {"prod1", num(r.prod1)},
            {"prod2", num(r.prod2)},
            {"mertens_ratio", num(r.mertens_ratio)},
            {"identity_residual", num(r.identity_residual)},
            {"prod2_asymptotic", num(r.prod2_asymptotic)},
            {"en", num(r.en)},
            {"qn", num(r.qn)},
            {"log10_decay", num(r.log10_decay)}};
  if (r.gap) {
    j["gap"] = *r.gap;
    j["branch_log10_decay"] = num(*r.branch_log10_decay);
  }
  return j.dump(2) + "\n";
}

// --- witnesses -------------------------------------------------------------

std::string witness_header() { return "n,p_lo,p_hi,twin_lead,cousin_lead,status"; }

std::string witness_row(const ConjectureWitness& w) {
  std::ostringstream s;
  s << w.n << ',' << w.p_lo << ',' << w.p_hi << ',';
  if (w.twin_lead) s << *w.twin_lead;
  s << ',';
  if (w.cousin_lead) s << *w.cousin_lead;
  s << ',' << to_string(w.status);
  return s.str();
}

// --- figures ---------------------------------------------------------------

std::optional<FigureId> parse_figure_id(const std::string& name) {
  if (name == "fig1_hist") return FigureId::fig1_hist;
  if (name == "fig2_theta") return FigureId::fig2_theta;
  if (name == "fig2_decay") return FigureId::fig2_decay;
  return std::nullopt;
}

const char* to_string(FigureId id) {
  switch (id) {
    case FigureId::fig1_hist:
      return "fig1_hist";
    case FigureId::fig2_theta:
      return "fig2_theta";
    case FigureId::fig2_decay:
      return "fig2_decay";
  }
  return "?";
}

FigureDataset figure_hist(const PrimeSequence& primes, std::size_t l) {
  const DigitDistribution sample = interval_distribution(primes, l + 1);
  const DigitDistribution reference = analytic_distribution(l);
  FigureDataset fig;
  fig.id = FigureId::fig1_hist;
  for (std::size_t v = 0; v < sample.mass.size(); ++v)
    fig.rows.push_back({static_cast<double>(v), "sample", sample.mass[v]});
  for (std::size_t v = 0; v < reference.mass.size(); ++v)
    fig.rows.push_back({static_cast<double>(v), "reference", reference.mass[v]});
  return fig;
}

FigureDataset figure_theta(const std::vector<IntervalRecord>& records, std::size_t burn_in) {
  FigureDataset fig;
  fig.id = FigureId::fig2_theta;
  const ThetaSeries twin = theta_series(records, PairKind::twin, burn_in);
  const ThetaSeries cousin = theta_series(records, PairKind::cousin, burn_in);
  for (const auto& r : records) fig.rows.push_back({static_cast<double>(r.n), "theta_twin", r.theta_twin});
  for (const auto& r : records) fig.rows.push_back({static_cast<double>(r.n), "theta_cousin", r.theta_cousin});
  for (const auto& r : records)
    if (r.n > burn_in) fig.rows.push_back({static_cast<double>(r.n), "mean_twin", twin.mean});
  for (const auto& r : records)
    if (r.n > burn_in) fig.rows.push_back({static_cast<double>(r.n), "mean_cousin", cousin.mean});
  return fig;
}

FigureDataset figure_decay(const std::vector<IntervalRecord>& records, DecayMode mode) {
  FigureDataset fig;
  fig.id = FigureId::fig2_decay;
  std::map<std::uint64_t, std::vector<FigureRow>> by_gap;
  for (const auto& r : records) {
    const double q = mode == DecayMode::empirical ? r.q_twin : asymptotic_density(static_cast<double>(r.p_hi));
    const std::uint64_t gap = r.p_hi - r.p_lo;
    by_gap[gap].push_back(
        {static_cast<double>(r.n), "gap=" + std::to_string(gap), qn_probability(q, r.t_n).log10_decay});
  }
  for (auto& [gap, rows] : by_gap) fig.rows.insert(fig.rows.end(), rows.begin(), rows.end());
  // The approximate prime is meaningless below n = 4.
  for (const auto& r : records)
    if (approximate_prime(r.n) > 2.0)
      fig.rows.push_back({static_cast<double>(r.n), "branch_gap2", branch_curve(r.n, 2).log10_decay});
  return fig;
}

void write_figure(std::ostream& out, const FigureDataset& fig) {
  out << fingerprint(std::string("figure ") + to_string(fig.id)) << '\n' << "x,series,y\n";
  for (const auto& row : fig.rows) out << format_exact(row.x) << ',' << row.series << ',' << format_exact(row.y) << '\n';
}

void write_histogram(std::ostream& out, const DigitDistribution& sample, const DigitDistribution& reference) {
  out << fingerprint("population histogram") << '\n' << "digit,sample_mass,reference_mass\n";
  const std::size_t size = std::max(sample.mass.size(), reference.mass.size());
  for (std::size_t v = 0; v < size; ++v) {
    const double s = v < sample.mass.size() ? sample.mass[v] : 0.0;
    const double r = v < reference.mass.size() ? reference.mass[v] : 0.0;
    out << v << ',' << format_exact(s) << ',' << format_exact(r) << '\n';
  }
}

}  // namespace primeclock::io
