#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "wassercop/copulas.hpp"
#include "wassercop/distributions.hpp"
#include "wassercop/ot_oracle.hpp"
#include "wassercop/wasserstein.hpp"

namespace wassercop::io {

/// "0.25", "3", "1e-2" or "1/3"; throws ParseError.
Rational parse_weight(const std::string& text);

/// One sample per line with an optional weight column; optional header
/// `x[,w]`.
Distribution1D parse_distribution_csv(const std::string& text);
/// {"kind": "empirical", "atoms": [[x, w], ...]}, {"kind": "normal",
/// "mean": m, "stddev": s}, "uniform" (a, b), "exponential" (rate),
/// "point_mass" (location).
Distribution1D parse_distribution_json(const nlohmann::json& j);
nlohmann::json distribution_to_json(const Distribution1D& d);

/// Dispatches on the extension: .json or CSV otherwise.
Distribution1D read_distribution(const std::filesystem::path& path);

/// d columns per row, optional header. With `rank` the rows are raw data and
/// are converted to pseudo-observations.
CopulaSpec parse_copula_csv(const std::string& text, bool rank);
CopulaSpec read_copula(const std::filesystem::path& path, bool rank);

/// Columns x1..xd with an optional trailing weight column named w.
DiscreteMeasureND parse_measure_csv(const std::string& text);
DiscreteMeasureND read_measure(const std::filesystem::path& path);

nlohmann::json report_to_json(const DistanceReport& r);
std::string report_to_csv(const DistanceReport& r);
std::string report_to_human(const DistanceReport& r);

nlohmann::json coupling_to_json(const DiscreteMeasureND& mu,
                                const DiscreteMeasureND& nu,
                                const OtSolution& solution);

std::string comonotone_pair_to_csv(const ComonotonePair& pair);

std::string read_text(const std::filesystem::path& path);

}  // namespace wassercop::io
