#ifndef MFMC_IO_WRITERS_HPP
#define MFMC_IO_WRITERS_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "mfmc/chain.hpp"

namespace mfmc {

// CSV schema: iter,K,sign,cum_cost,theta_0..theta_{d-1}. Doubles are printed
// with %.17g so a written file re-parses to bit-identical records. Files are
// written to a temp path and renamed into place.
void write_samples_csv(const std::vector<ChainSample>& samples,
                       const std::string& path);
std::vector<ChainSample> read_samples_csv(const std::string& path);

void write_json_atomic(const nlohmann::json& doc, const std::string& path);

}  // namespace mfmc

#endif  // MFMC_IO_WRITERS_HPP
