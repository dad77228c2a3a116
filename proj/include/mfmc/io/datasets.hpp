#ifndef MFMC_IO_DATASETS_HPP
#define MFMC_IO_DATASETS_HPP

#include <string>

#include "mfmc/linalg.hpp"

namespace mfmc {

// One decimal-year event time per line; '#' comments allowed. Returned
// sorted. Warns to stderr when the count is not the canonical 191.
Vector load_coal_dataset(const std::string& path);

struct LynxHareDataset {
  std::vector<long> years;
  Vector hare;
  Vector lynx;
};

// Header line then comma-separated year,hare,lynx rows. Warns when the row
// count is not the canonical 21 (1900-1920).
LynxHareDataset load_lynx_hare(const std::string& path);

}  // namespace mfmc

#endif  // MFMC_IO_DATASETS_HPP
