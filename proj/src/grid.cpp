#include "wassercop/grid.hpp"

#include <cmath>
#include <sstream>

#include "wassercop/errors.hpp"

namespace wassercop {

void GridSpec::validate() const {
  switch (kind) {
    case Kind::ExactBreakpoints:
      return;
    case Kind::UniformGrid:
      if (n < 2) throw DomainError("grid: uniform grid needs n >= 2");
      return;
    case Kind::AdaptiveQuadrature:
      if (!(tol > 0.0) || !std::isfinite(tol)) {
        throw DomainError("grid: adaptive tolerance must be > 0");
      }
      return;
  }
}

GridSpec GridSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg =
      colon == std::string::npos ? std::string() : text.substr(colon + 1);
  GridSpec grid;
  try {
    if (head == "exact" && arg.empty()) {
      grid = exact();
    } else if (head == "uniform" && !arg.empty()) {
      std::size_t used = 0;
      grid = uniform(std::stoi(arg, &used));
      if (used != arg.size()) throw std::invalid_argument(arg);
    } else if (head == "adaptive") {
      if (arg.empty()) {
        grid = adaptive();
      } else {
        std::size_t used = 0;
        grid = adaptive(std::stod(arg, &used));
        if (used != arg.size()) throw std::invalid_argument(arg);
      }
    } else {
      throw std::invalid_argument(text);
    }
  } catch (const std::logic_error&) {
    throw DomainError("grid: cannot parse '" + text + "'");
  }
  grid.validate();
  return grid;
}

std::string GridSpec::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::ExactBreakpoints:
      os << "exact";
      break;
    case Kind::UniformGrid:
      os << "uniform:" << n;
      break;
    case Kind::AdaptiveQuadrature:
      os << "adaptive:" << tol;
      break;
  }
  return os.str();
}

}  // namespace wassercop
