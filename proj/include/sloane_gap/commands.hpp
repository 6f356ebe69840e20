#pragma once

// Batch commands behind the sloane_gap executable. Each command reads its
// inputs, writes report files into the output directory and returns a JSON
// summary.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sloane_gap/analysis.hpp"
#include "sloane_gap/classes.hpp"
#include "sloane_gap/errors.hpp"
#include "sloane_gap/gap.hpp"
#include "sloane_gap/ingest.hpp"
#include "sloane_gap/synth.hpp"
#include "sloane_gap/version.hpp"

namespace sloane_gap {

inline constexpr std::uint64_t kDefaultSeed = 1729;
inline constexpr const char* kOutputEnvVar = "SLOANE_GAP_OUTPUT";

struct RunConfig {
  std::filesystem::path input_path;
  std::uint64_t n_max = kDefaultNMax;
  GapParams gap;
  ManyFactorsParams classes;
  std::uint64_t functions = kDefaultFunctions;
  std::uint64_t terms = kDefaultTermsPerFunction;
  std::optional<double> envelope_h;  // defaults to the fitted k
  double c_prime = 0.0;
  std::filesystem::path output_dir = "sloane_gap_out";
  std::uint64_t seed = kDefaultSeed;
  bool strict = false;
  bool no_synth = false;

  void validate() const {
    if (n_max < 1) throw DomainError("--n-max must be at least 1");
    gap.validate();
    if (!(classes.percentile > 0.0 && classes.percentile < 100.0)) throw DomainError("--omega-pct must lie in (0, 100)");
    if (functions < 1) throw DomainError("--functions must be at least 1");
    if (terms < 1) throw DomainError("--terms must be at least 1");
    if (envelope_h && !(*envelope_h > 0.0)) throw DomainError("--envelope-h must be positive");
  }
};

inline nlohmann::json to_json(const RunConfig& c) {
  return {{"input_path", c.input_path.string()},
          {"n_max", c.n_max},
          {"gap", to_json(c.gap)},
          {"classes", {{"window", c.classes.window}, {"omega_pct", c.classes.percentile}}},
          {"synth",
           {{"functions", c.functions},
            {"terms", c.terms},
            {"v_max", c.n_max},
            {"deduplicated", false},
            {"values_capped_before_counting", false}}},
          {"envelope", {{"h", c.envelope_h ? nlohmann::json(*c.envelope_h) : nlohmann::json("fit.k")},
                        {"c_prime", c.c_prime}}},
          {"output_dir", c.output_dir.string()},
          {"seed", c.seed},
          {"strict", c.strict},
          {"no_synth", c.no_synth}};
}

// The environment variable takes precedence over --output-dir.
inline void apply_environment(RunConfig& config) {
  if (const char* env = std::getenv(kOutputEnvVar); env != nullptr && *env != '\0') config.output_dir = env;
}

// Failure inside one stage of a command, tagged with the module it came from.
class StageError : public Error {
 public:
  StageError(std::string module, const std::string& message)
      : Error(module + ": " + message), module_(std::move(module)) {}
  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

template <class F>
auto run_stage(const std::string& module, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(module, e.what());
  }
}

namespace detail {

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string file_date(const std::filesystem::path& path) {
  std::error_code ec;
  const auto mtime = std::filesystem::last_write_time(path, ec);
  if (ec) return "unknown date";
  const auto sys = std::chrono::file_clock::to_sys(mtime);
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::time_point_cast<std::chrono::system_clock::duration>(sys));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[16];
  std::strftime(buf, sizeof buf, "%Y-%m-%d", &tm);
  return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.close();
  if (!out) throw IoError("cannot write " + path.string());
}

}  // namespace detail

// Everything a run needs to be reproduced, embedded into every output.
inline nlohmann::json provenance(const RunConfig& config, const std::string& snapshot_label) {
  return {{"snapshot_label", snapshot_label},
          {"artifact_version", kVersion},
          {"run_config", to_json(config)},
          {"generated_at", detail::utc_timestamp()}};
}

class ReportWriter {
 public:
  ReportWriter(const RunConfig& config, std::string snapshot_label)
      : dir_(config.output_dir), provenance_(provenance(config, snapshot_label)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
  }

  // CSV files carry their provenance on a leading '#' line before the header.
  template <class Emit>
  std::filesystem::path csv(const std::string& name, Emit&& emit) const {
    std::ostringstream os;
    os << "# provenance: " << provenance_.dump() << '\n';
    emit(os);
    return write(name, os.str());
  }

  std::filesystem::path json(const std::string& name, nlohmann::json body) const {
    body["provenance"] = provenance_;
    return write(name, body.dump(2) + "\n");
  }

  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path write(const std::string& name, const std::string& content) const {
    const auto path = dir_ / name;
    detail::write_file(path, content);
    return path;
  }

  std::filesystem::path dir_;
  nlohmann::json provenance_;
};

struct LoadedTable {
  OccurrenceTable table;
  std::size_t sequences_parsed = 0;
  std::size_t skipped_lines = 0;
  std::vector<SkippedLine> skipped;
};

// Reads a stripped file, or a counts JSON previously written by `ingest`.
inline LoadedTable load_table(const RunConfig& config) {
  return run_stage("ingest", [&] {
    if (config.input_path.empty()) throw IoError("no input given (use --input PATH)");
    std::ifstream in(config.input_path, std::ios::binary);
    if (!in) throw IoError("cannot open " + config.input_path.string());
    LoadedTable loaded;
    if (config.input_path.extension() == ".json") {
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw IoError("cannot parse " + config.input_path.string() + ": " + e.what());
      }
      loaded.table = counts_from_json(j);
      return loaded;
    }
    IngestOptions options;
    options.n_max = config.n_max;
    options.strict = config.strict;
    options.snapshot_label = config.input_path.filename().string() + " (" + detail::file_date(config.input_path) + ")";
    auto result = read_stripped(in, options);
    loaded.table = std::move(result.table);
    loaded.sequences_parsed = result.sequences_parsed;
    loaded.skipped_lines = result.skipped_lines;
    loaded.skipped = std::move(result.skipped);
    return loaded;
  });
}

inline nlohmann::json cmd_ingest(const RunConfig& config) {
  config.validate();
  const auto loaded = load_table(config);
  const auto& table = loaded.table;
  ReportWriter out(config, table.snapshot_label());
  run_stage("ingest", [&] {
    out.csv("counts.csv", [&](std::ostream& os) { write_counts_csv(os, table); });
    out.json("counts.json", counts_to_json(table));
    out.csv("absent.csv", [&](std::ostream& os) {
      os << "n\n";
      for (auto n : absent_numbers(table, table.n_max())) os << n << '\n';
    });
    if (table.n_max() >= 2) {
      out.csv("interesting.csv", [&](std::ostream& os) {
        os << "n\n";
        for (auto n : interesting_numbers(table)) os << n << '\n';
      });
    }
  });
  nlohmann::json skipped = nlohmann::json::array();
  for (const auto& s : loaded.skipped) skipped.push_back({{"line", s.line_number}, {"reason", s.reason}});
  return {{"sequences_parsed", loaded.sequences_parsed},
          {"total_terms_seen", table.total_terms_seen()},
          {"n_max", table.n_max()},
          {"skipped_lines", loaded.skipped_lines},
          {"skipped", skipped}};
}

namespace detail {

inline nlohmann::json write_fit(const RunConfig& config, const OccurrenceTable& table, const ReportWriter& out) {
  return run_stage("analysis", [&] {
    const auto fit = fit_power_law(table);
    out.json("fit.json", to_json(fit));
    const double h = config.envelope_h.value_or(fit.k);
    if (table.n_max() >= 3) {
      out.csv("envelope.csv", [&](std::ostream& os) {
        os << "n,upper,lower,k_bound\n";
        for (const auto& p : theory_envelope(3, table.n_max(), h, config.c_prime)) {
          os << p.n << ',' << format_real(p.upper) << ',' << format_real(p.lower) << ','
             << format_real(p.k_upper_bound) << '\n';
        }
      });
    }
    return to_json(fit);
  });
}

inline GapPartition write_gap(const RunConfig& config, const OccurrenceTable& table, const ReportWriter& out,
                              nlohmann::json& summary) {
  return run_stage("gap", [&] {
    auto partition = classify(table, config.gap);
    out.csv("partition.csv", [&](std::ostream& os) { write_partition_csv(os, table, partition); });
    summary = {{"size_A", partition.size_a()},
               {"fraction_A", partition.fraction_a()},
               {"gap_score", gap_score(table, config.gap)}};
    out.json("gap.json", summary);
    return partition;
  });
}

inline nlohmann::json write_classes(const RunConfig& config, const OccurrenceTable& table, const GapPartition& partition,
                                    const ReportWriter& out) {
  return run_stage("classes", [&] {
    const auto flags = build_class_flags(partition.n_start(), partition.n_end(), config.classes);
    const auto tab = cross_tab(partition, flags);
    const auto squares = members_below_gap(table, partition, flags, NumberClass::squares);
    const auto primes = members_below_gap(table, partition, flags, NumberClass::primes);
    out.csv("table1.csv", [&](std::ostream& os) { write_table1_csv(os, squares); });
    out.csv("table2.csv", [&](std::ostream& os) { write_table2_csv(os, tab); });
    out.csv("figure3.csv", [&](std::ostream& os) { write_figure3_csv(os, proportion_in_a_by_omega(partition, flags)); });

    auto entries = [](const std::vector<BelowGapEntry>& rows) {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& r : rows) arr.push_back({{"n", r.n}, {"count", r.count}, {"limit", r.limit}});
      return arr;
    };
    const auto many = static_cast<std::uint64_t>(std::count(flags.many_factors.begin(), flags.many_factors.end(), true));
    nlohmann::json summary = {
        {"squares_below_gap", entries(squares)},
        {"primes_below_gap", entries(primes)},
        {"many_factors_count", many},
        {"unexplained_in_A", tab.unexplained.count_in_a},
        {"notes",
         {"Published non-A primes are 947, 8963 and 9623; a later mention of 6923 is treated as a typo for 9623.",
          "Boundary for n < 500 uses the percentile rule clipped at n_start instead of a hand-drawn line.",
          "Cumulative percentages count each n once, under the first matching class (primes, squares, many_factors)."}}};
    out.json("classes.json", summary);
    return summary;
  });
}

inline nlohmann::json write_simulation(const RunConfig& config, const OccurrenceTable* real, const ReportWriter& out) {
  return run_stage("synth", [&] {
    SimulationOptions options;
    options.num_functions = config.functions;
    options.terms_per_function = config.terms;
    options.v_max = config.n_max;
    const auto sim = simulate(config.seed, options);
    out.csv("synthetic_counts.csv", [&](std::ostream& os) { write_synthetic_csv(os, sim); });
    nlohmann::json summary = {{"seed", sim.seed},
                              {"num_functions", sim.num_functions},
                              {"terms_per_function", sim.terms_per_function},
                              {"total_values", sim.total_values},
                              {"counted", sim.counted},
                              {"discarded", sim.discarded}};
    if (real != nullptr) {
      auto cmp = to_json(compare_gap(*real, sim, config.gap));
      cmp["simulation"] = summary;
      out.json("comparison.json", cmp);
      summary["comparison"] = cmp;
    }
    return summary;
  });
}

}  // namespace detail

inline nlohmann::json cmd_fit(const RunConfig& config) {
  config.validate();
  const auto loaded = load_table(config);
  ReportWriter out(config, loaded.table.snapshot_label());
  return detail::write_fit(config, loaded.table, out);
}

inline nlohmann::json cmd_gap(const RunConfig& config) {
  config.validate();
  const auto loaded = load_table(config);
  ReportWriter out(config, loaded.table.snapshot_label());
  nlohmann::json summary;
  detail::write_gap(config, loaded.table, out, summary);
  return summary;
}

inline nlohmann::json cmd_classes(const RunConfig& config) {
  config.validate();
  const auto loaded = load_table(config);
  ReportWriter out(config, loaded.table.snapshot_label());
  nlohmann::json gap_summary;
  const auto partition = detail::write_gap(config, loaded.table, out, gap_summary);
  return detail::write_classes(config, loaded.table, partition, out);
}

// Synthetic counts always; the comparison report only when an input is given.
inline nlohmann::json cmd_simulate(const RunConfig& config) {
  config.validate();
  if (config.input_path.empty()) {
    ReportWriter out(config, "synthetic");
    return detail::write_simulation(config, nullptr, out);
  }
  const auto loaded = load_table(config);
  ReportWriter out(config, loaded.table.snapshot_label());
  return detail::write_simulation(config, &loaded.table, out);
}

inline nlohmann::json cmd_report(const RunConfig& config) {
  config.validate();
  const auto loaded = load_table(config);
  const auto& table = loaded.table;
  ReportWriter out(config, table.snapshot_label());
  run_stage("ingest", [&] { out.csv("counts.csv", [&](std::ostream& os) { write_counts_csv(os, table); }); });

  nlohmann::json summary;
  summary["fit"] = detail::write_fit(config, table, out);
  nlohmann::json gap_summary;
  const auto partition = detail::write_gap(config, table, out, gap_summary);
  summary["gap"] = gap_summary;
  summary["classes"] = detail::write_classes(config, table, partition, out);
  if (!config.no_synth) summary["synth"] = detail::write_simulation(config, &table, out);
  return summary;
}

}  // namespace sloane_gap
