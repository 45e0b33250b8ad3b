#ifndef TORUSFIT_FIXTURES_HPP
#define TORUSFIT_FIXTURES_HPP

#include <string_view>
#include <vector>

#include "torusfit/model.hpp"

namespace torusfit {

// Embedded 16 x 16 wind-direction tables (same contents as fixtures/*.csv).
std::vector<std::string_view> dataset_names();
CountTable dataset(std::string_view name);

}  // namespace torusfit

#endif  // TORUSFIT_FIXTURES_HPP
