/**
 * @file io.hpp
 * @brief File formats: ensemble definitions, result JSON, CSV exports and
 * the aligned-text policy table.
 *
 * Ensemble definition file:
 *
 *     { "label": "bpsk", "entries": [ { "p": 0.5, "re": 1, "im": 0 }, ... ] }
 *
 * CSV files use '.' as decimal separator, a mandatory header row and
 * newline-terminated rows. Reals are written in shortest round-trip form.
 */
#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "homodyne/ensemble.hpp"
#include "homodyne/information.hpp"
#include "homodyne/montecarlo.hpp"
#include "homodyne/povm.hpp"
#include "homodyne/trajectory.hpp"

namespace homodyne {

using json = nlohmann::json;

/// Shortest decimal string that parses back to exactly `value`.
[[nodiscard]] std::string format_real(double value);

/// Throws std::invalid_argument on schema violations (and via Ensemble on bad priors).
[[nodiscard]] Ensemble ensemble_from_json(const json &j);
[[nodiscard]] json ensemble_to_json(const Ensemble &e);

/// Reads an ensemble definition file. Throws std::runtime_error if it cannot be opened or parsed.
[[nodiscard]] Ensemble load_ensemble_file(const std::filesystem::path &path);

[[nodiscard]] json to_json(const SimConfig &cfg);
[[nodiscard]] json to_json(const PolicySpec &policy);
[[nodiscard]] json to_json(const BatchStatistics &stats);
[[nodiscard]] json to_json(const PolicyComparison &cmp);

/// Header: n,I1,I2,I3.
void write_bounds_csv(std::ostream &out, std::span<const CapacityPoint> curve);

/// Header: x,y,semi_major,semi_minor,orientation_rad,xi_abs,xi_arg,true_index.
void write_povm_csv(std::ostream &out, std::span<const PovmSample> samples);

/// Header: t,phi,dQ,p_1..p_K. Phases are reduced to [0, 2*pi).
void write_record_csv(std::ostream &out, std::span<const RecordEntry> record,
                      std::size_t n_states);

/// One-line CSV summary of a batch. Header: ensemble,policy,n,mean_gain,std_gain,ci_half_width.
void write_batch_csv(std::ostream &out, const BatchStatistics &stats);

/// Table-I-shaped aligned text: one column per ensemble.
[[nodiscard]] std::string format_comparison_table(std::span<const PolicyComparison> rows);

} // namespace homodyne
