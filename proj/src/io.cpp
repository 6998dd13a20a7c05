#include "wassercop/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <regex>
#include <sstream>

#include "wassercop/errors.hpp"

namespace wassercop::io {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, sep)) out.push_back(trim(field));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

// Non-empty lines that are not '#' comments, with their 1-based numbers.
std::vector<std::pair<int, std::string>> content_lines(const std::string& text) {
  std::vector<std::pair<int, std::string>> out;
  std::istringstream is(text);
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    out.emplace_back(number, line);
  }
  return out;
}

bool try_parse_double(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

double parse_real(const std::string& s, int line) {
  double v = 0.0;
  if (!try_parse_double(s, v) || !std::isfinite(v)) {
    throw ParseError("line " + std::to_string(line) + ": not a finite number: '" +
                     s + "'");
  }
  return v;
}

bool is_numeric_row(const std::vector<std::string>& fields) {
  double ignored = 0.0;
  return std::all_of(fields.begin(), fields.end(), [&](const std::string& f) {
    return try_parse_double(f, ignored) || f.find('/') != std::string::npos;
  });
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Rational parse_decimal(const std::string& s) {
  static const std::regex kDecimal(R"(^([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?$)");
  std::smatch m;
  if (!std::regex_match(s, m, kDecimal) || (m[2].length() == 0 && m[3].length() == 0)) {
    throw ParseError("not a decimal number: '" + s + "'");
  }
  std::string digits = m[2].str() + m[3].str();
  // cpp_int reads a leading 0 as an octal prefix
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
  boost::multiprecision::cpp_int mantissa(digits.empty() ? "0" : digits);
  long exponent = m[4].matched ? std::stol(m[4].str()) : 0L;
  exponent -= static_cast<long>(m[3].length());
  if (std::abs(exponent) > 400) throw ParseError("exponent out of range: '" + s + "'");
  boost::multiprecision::cpp_int scale = 1;
  for (long k = 0; k < std::abs(exponent); ++k) scale *= 10;
  Rational r = exponent >= 0 ? Rational(mantissa * scale) : Rational(mantissa, scale);
  return m[1] == "-" ? Rational(-r) : r;
}

double checked_number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ParseError(std::string("distribution JSON: missing numeric field '") +
                     key + "'");
  }
  return j.at(key).get<double>();
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Rational parse_weight(const std::string& raw) {
  const std::string text = trim(raw);
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_decimal(text);
  const Rational num = parse_decimal(trim(text.substr(0, slash)));
  const Rational den = parse_decimal(trim(text.substr(slash + 1)));
  if (den == 0) throw ParseError("zero denominator in '" + text + "'");
  return num / den;
}

// ---------------------------------------------------------------------------
// Distributions

Distribution1D parse_distribution_csv(const std::string& text) {
  auto lines = content_lines(text);
  if (lines.empty()) throw ParseError("distribution CSV: no data");
  bool weighted = false;
  std::size_t start = 0;
  const auto head = split(lines.front().second, ',');
  if (!is_numeric_row(head)) {
    if (head == std::vector<std::string>{"x"}) {
      weighted = false;
    } else if (head == std::vector<std::string>{"x", "w"}) {
      weighted = true;
    } else {
      throw ParseError("distribution CSV: header must be 'x' or 'x,w'");
    }
    start = 1;
  } else {
    weighted = head.size() == 2;
  }
  std::vector<Atom> atoms;
  for (std::size_t k = start; k < lines.size(); ++k) {
    const auto& [number, line] = lines[k];
    const auto fields = split(line, ',');
    if (fields.size() != (weighted ? 2U : 1U)) {
      throw ParseError("line " + std::to_string(number) +
                       ": expected " + (weighted ? "2" : "1") + " column(s)");
    }
    const double x = parse_real(fields[0], number);
    double w = 1.0;
    if (weighted) {
      try {
        w = parse_weight(fields[1]).convert_to<double>();
      } catch (const ParseError& e) {
        throw ParseError("line " + std::to_string(number) + ": " + e.what());
      }
      if (!(w > 0.0)) {
        throw ParseError("line " + std::to_string(number) + ": weight must be positive");
      }
    }
    atoms.push_back({x, w});
  }
  if (atoms.empty()) throw ParseError("distribution CSV: no data rows");
  return Distribution1D::empirical(std::move(atoms));
}

Distribution1D parse_distribution_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ParseError("distribution JSON: expected an object with a 'kind'");
  }
  const auto kind = j.at("kind").get<std::string>();
  try {
    if (kind == "empirical") {
      if (!j.contains("atoms") || !j.at("atoms").is_array()) {
        throw ParseError("distribution JSON: empirical needs 'atoms'");
      }
      std::vector<Atom> atoms;
      for (const auto& a : j.at("atoms")) {
        if (!a.is_array() || a.size() != 2 || !a[0].is_number()) {
          throw ParseError("distribution JSON: atoms must be [x, w] pairs");
        }
        double w = 0.0;
        if (a[1].is_number()) {
          w = a[1].get<double>();
        } else if (a[1].is_string()) {
          w = parse_weight(a[1].get<std::string>()).convert_to<double>();
        } else {
          throw ParseError("distribution JSON: weight must be a number or string");
        }
        atoms.push_back({a[0].get<double>(), w});
      }
      return Distribution1D::empirical(std::move(atoms));
    }
    if (kind == "point_mass") return Distribution1D::point_mass(checked_number(j, "location"));
    if (kind == "uniform") {
      return Distribution1D::uniform(checked_number(j, "a"), checked_number(j, "b"));
    }
    if (kind == "normal") {
      return Distribution1D::normal(checked_number(j, "mean"), checked_number(j, "stddev"));
    }
    if (kind == "exponential") return Distribution1D::exponential(checked_number(j, "rate"));
  } catch (const DomainError& e) {
    throw ParseError(std::string("distribution JSON: ") + e.what());
  }
  throw ParseError("distribution JSON: unknown kind '" + kind + "'");
}

json distribution_to_json(const Distribution1D& d) {
  switch (d.kind()) {
    case Distribution1D::Kind::Empirical: {
      json atoms = json::array();
      for (const Atom& a : d.atoms()) atoms.push_back({a.location, a.weight});
      return {{"kind", "empirical"}, {"atoms", atoms}};
    }
    case Distribution1D::Kind::PointMass:
      return {{"kind", "point_mass"}, {"location", d.param1()}};
    case Distribution1D::Kind::Uniform:
      return {{"kind", "uniform"}, {"a", d.param1()}, {"b", d.param2()}};
    case Distribution1D::Kind::Normal:
      return {{"kind", "normal"}, {"mean", d.param1()}, {"stddev", d.param2()}};
    case Distribution1D::Kind::Exponential:
      return {{"kind", "exponential"}, {"rate", d.param1()}};
  }
  return {};
}

Distribution1D read_distribution(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  if (path.extension() == ".json") {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw ParseError(path.string() + ": " + e.what());
    }
    return parse_distribution_json(j);
  }
  try {
    return parse_distribution_csv(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const DomainError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Copulas and measures

CopulaSpec parse_copula_csv(const std::string& text, bool rank) {
  const auto lines = content_lines(text);
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const auto& [number, line] = lines[k];
    const auto fields = split(line, ',');
    if (k == 0 && !is_numeric_row(fields)) continue;
    std::vector<double> row;
    for (const auto& f : fields) row.push_back(parse_real(f, number));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("line " + std::to_string(number) + ": inconsistent column count");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("copula CSV: no rows");
  try {
    return rank ? CopulaSpec::empirical_from_data(rows)
                : CopulaSpec::empirical(std::move(rows));
  } catch (const DomainError& e) {
    throw ParseError(std::string("copula CSV: ") + e.what());
  }
}

CopulaSpec read_copula(const std::filesystem::path& path, bool rank) {
  try {
    return parse_copula_csv(read_text(path), rank);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

DiscreteMeasureND parse_measure_csv(const std::string& text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw ParseError("measure CSV: no data");
  bool weighted = false;
  std::size_t start = 0;
  const auto head = split(lines.front().second, ',');
  if (!is_numeric_row(head)) {
    weighted = head.back() == "w";
    start = 1;
  }
  std::vector<std::vector<double>> locations;
  std::vector<Rational> masses;
  for (std::size_t k = start; k < lines.size(); ++k) {
    const auto& [number, line] = lines[k];
    const auto fields = split(line, ',');
    if (start == 1 && fields.size() != head.size()) {
      throw ParseError("line " + std::to_string(number) + ": column count differs from header");
    }
    const std::size_t coords = weighted ? fields.size() - 1 : fields.size();
    if (coords == 0) throw ParseError("line " + std::to_string(number) + ": no coordinates");
    std::vector<double> x;
    for (std::size_t c = 0; c < coords; ++c) x.push_back(parse_real(fields[c], number));
    Rational m = 1;
    if (weighted) {
      m = parse_weight(fields.back());
      if (m <= 0) throw ParseError("line " + std::to_string(number) + ": weight must be positive");
    }
    locations.push_back(std::move(x));
    masses.push_back(m);
  }
  if (locations.empty()) throw ParseError("measure CSV: no data rows");
  try {
    return {std::move(locations), std::move(masses)};
  } catch (const DomainError& e) {
    throw ParseError(std::string("measure CSV: ") + e.what());
  }
}

DiscreteMeasureND read_measure(const std::filesystem::path& path) {
  try {
    return parse_measure_csv(read_text(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Reports

json report_to_json(const DistanceReport& r) {
  json j;
  j["p"] = r.p;
  j["q"] = r.q ? json(*r.q) : json(nullptr);
  j["value"] = r.value;
  j["power_value"] = r.power_value;
  j["method"] = to_string(r.method);
  j["error_estimate"] = r.error_estimate;
  j["bounds"] = r.bounds ? json{{"lower", r.bounds->first}, {"upper", r.bounds->second}}
                         : json(nullptr);
  if (r.copula) j["copula"] = *r.copula;
  return j;
}

std::string report_to_csv(const DistanceReport& r) {
  std::ostringstream os;
  os << "p,q,value,power_value,method,error_estimate,lower,upper\n";
  os << format_double(r.p) << ',' << (r.q ? format_double(*r.q) : "") << ','
     << format_double(r.value) << ',' << format_double(r.power_value) << ','
     << to_string(r.method) << ',' << format_double(r.error_estimate) << ','
     << (r.bounds ? format_double(r.bounds->first) : "") << ','
     << (r.bounds ? format_double(r.bounds->second) : "") << '\n';
  return os.str();
}

std::string report_to_human(const DistanceReport& r) {
  std::ostringstream os;
  os << "method:         " << to_string(r.method) << '\n'
     << "p:              " << format_double(r.p) << '\n';
  if (r.q) os << "q:              " << format_double(*r.q) << '\n';
  os << "W_p:            " << format_double(r.value) << '\n'
     << "W_p^p:          " << format_double(r.power_value) << '\n'
     << "error estimate: " << format_double(r.error_estimate) << '\n';
  if (r.bounds) {
    os << "W_{p,q}^p in    [" << format_double(r.bounds->first) << ", "
       << format_double(r.bounds->second) << "]\n";
  }
  if (r.copula) os << "copula:         " << *r.copula << '\n';
  return os.str();
}

json coupling_to_json(const DiscreteMeasureND& mu, const DiscreteMeasureND& nu,
                      const OtSolution& solution) {
  auto atoms = [](const DiscreteMeasureND& m) {
    json out = json::array();
    for (std::size_t k = 0; k < m.size(); ++k) {
      out.push_back({{"location", m.locations()[k]},
                     {"mass", m.mass(k)},
                     {"mass_exact", m.masses()[k].str()}});
    }
    return out;
  };
  json entries = json::array();
  for (const CouplingEntry& e : solution.witness.entries) {
    entries.push_back({{"i", e.i},
                       {"j", e.j},
                       {"mass", e.mass.convert_to<double>()},
                       {"mass_exact", e.mass.str()}});
  }
  return {{"value", solution.value},
          {"method", to_string(Method::OracleLP)},
          {"entries", entries},
          {"source", atoms(mu)},
          {"target", atoms(nu)}};
}

std::string comonotone_pair_to_csv(const ComonotonePair& pair) {
  std::ostringstream os;
  os << "x,y,mass\n";
  for (std::size_t k = 0; k < pair.size(); ++k) {
    os << format_double(pair.pairs[k].first) << ','
       << format_double(pair.pairs[k].second) << ','
       << format_double(pair.masses[k]) << '\n';
  }
  return os.str();
}

}  // namespace wassercop::io
