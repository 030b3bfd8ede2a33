#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "primeclock/analytic.hpp"
#include "primeclock/counter_engine.hpp"
#include "primeclock/interval_stats.hpp"
#include "primeclock/population_model.hpp"
#include "primeclock/verifier.hpp"

namespace primeclock::io {

inline constexpr int kSchemaVersion = 1;

/// 17 significant digits: parses back to the same double.
std::string format_exact(double x);
/// Six digits after the point, for display.
std::string format_pretty(double x);

/// `# primeclock <what> schema_version=1`
std::string fingerprint(const std::string& what);

// --- engine trace ---------------------------------------------------------

/// Trace of the counter engine over [3, limit]: header, then i,kind,tuple.
void write_engine_trace(std::ostream& out, std::uint64_t limit);
void write_prime_table(std::ostream& out, const PrimeTable& table);

// --- interval scan --------------------------------------------------------

struct ScanColumns {
  bool twin = true;
  bool cousin = true;
  bool pretty = false;
};

std::string scan_header();
std::string scan_row(const IntervalRecord& rec, const ScanColumns& cols);

/// Sidecar manifest that lets a scan resume at interval granularity.
struct ScanManifest {
  int schema_version = kSchemaVersion;
  std::size_t n_from = 0;
  std::size_t n_to = 0;
  std::size_t completed_through = 0;  // n_from - 1 when nothing completed
  std::string kinds;

  std::string to_json() const;
  /// CacheError on malformed JSON or a schema mismatch.
  static ScanManifest from_json(const std::string& text);
};

std::filesystem::path manifest_path(const std::filesystem::path& csv);

struct ScanOptions {
  std::size_t n_from = 3;
  std::size_t n_to = 3;
  ScanColumns columns;
  unsigned jobs = 1;
  bool resume = false;
  std::size_t chunk = 256;  // intervals per checkpoint
};

/// Scans [n_from, n_to] into `out`, checkpointing the manifest after every
/// chunk. With resume, rows past the manifest's completed_through are
/// dropped and the scan continues from there. Returns intervals computed.
std::size_t run_scan(const PrimeSequence& primes, const std::filesystem::path& out, const ScanOptions& opts);

// --- record cache ---------------------------------------------------------

/// Text cache of IntervalRecords guarded by a record count and an FNV-1a
/// checksum over the body.
void write_cache(std::ostream& out, const std::vector<IntervalRecord>& records);
/// CacheError on version mismatch (with a migration hint), truncation or
/// checksum failure.
std::vector<IntervalRecord> read_cache(std::istream& in);

void write_cache_file(const std::filesystem::path& path, const std::vector<IntervalRecord>& records);
std::vector<IntervalRecord> read_cache_file(const std::filesystem::path& path);

std::uint64_t fnv1a64(const std::string& bytes);

/// Default cache directory: $PRIMECLOCK_CACHE, else ./.primeclock-cache.
std::filesystem::path default_cache_dir();
std::filesystem::path interval_cache_path(const std::filesystem::path& dir);

// --- estimates ------------------------------------------------------------

struct EstimateRecord {
  std::size_t n = 0;
  double c2_partial = 0;
  double prod1 = 0;
  double prod2 = 0;
  double mertens_ratio = 0;
  double identity_residual = 0;
  double prod2_asymptotic = 0;
  double en = 0;  // NaN for n < 3
  double qn = 0;
  double log10_decay = 0;
  std::optional<std::uint64_t> gap;
  std::optional<double> branch_log10_decay;
};

/// Products at n; q_n in asymptotic mode with the actual T_n.
EstimateRecord estimate(const PrimeSequence& primes, std::size_t n, std::optional<std::uint64_t> gap = {});
std::string to_json(const EstimateRecord& rec);

// --- witnesses ------------------------------------------------------------

std::string witness_header();
std::string witness_row(const ConjectureWitness& w);

// --- figures --------------------------------------------------------------

enum class FigureId { fig1_hist, fig2_theta, fig2_decay };

std::optional<FigureId> parse_figure_id(const std::string& name);
const char* to_string(FigureId id);

struct FigureRow {
  double x = 0;
  std::string series;
  double y = 0;
};

struct FigureDataset {
  FigureId id = FigureId::fig1_hist;
  std::vector<FigureRow> rows;  // grouped by series, x ascending within each
};

enum class DecayMode { asymptotic, empirical };

/// Digit histogram of I_{l} against the analytic population.
FigureDataset figure_hist(const PrimeSequence& primes, std::size_t l);
/// Theta_n per n plus the post-burn-in means as constant series.
FigureDataset figure_theta(const std::vector<IntervalRecord>& records, std::size_t burn_in);
/// log10 (1 - Q_n)^{T_n} per n under series "gap=G", plus the gap-2 branch curve.
FigureDataset figure_decay(const std::vector<IntervalRecord>& records, DecayMode mode);

void write_figure(std::ostream& out, const FigureDataset& fig);

/// digit,sample_mass,reference_mass
void write_histogram(std::ostream& out, const DigitDistribution& sample, const DigitDistribution& reference);

}  // namespace primeclock::io
