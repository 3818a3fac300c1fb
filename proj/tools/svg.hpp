#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace qdec::svg {

// Histogram of values with an optional vertical marker (e.g. a bound).
std::string histogram(const std::vector<double>& values, const std::string& title, const std::string& xlabel,
                      std::optional<double> marker = std::nullopt, int bins = 30);

// Filled polygon in the first quadrant.
std::string region(const std::vector<std::array<double, 2>>& polygon, const std::string& title,
                   const std::string& xlabel, const std::string& ylabel);

}  // namespace qdec::svg
