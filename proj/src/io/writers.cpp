#include "mfmc/io/writers.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mfmc {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void commit_file(const std::string& tmp, const std::string& path) {
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("write: cannot rename " + tmp + " to " + path);
  }
}

}  // namespace

void write_samples_csv(const std::vector<ChainSample>& samples,
                       const std::string& path) {
  const std::size_t dim = samples.empty() ? 0 : samples.front().theta.size();
  const std::string tmp = path + ".tmp";
  std::ofstream out(tmp, std::ios::trunc);
  if (!out) throw std::runtime_error("write_samples_csv: cannot open " + tmp);

  out << "iter,K,sign,cum_cost";
  for (std::size_t d = 0; d < dim; ++d) out << ",theta_" << d;
  out << "\n";
  for (const auto& s : samples) {
    out << s.iter << ',' << s.fidelity << ',' << s.sign << ','
        << format_double(s.cum_cost);
    for (double v : s.theta) out << ',' << format_double(v);
    out << "\n";
  }
  out.close();
  if (!out) throw std::runtime_error("write_samples_csv: write failed for " + path);
  commit_file(tmp, path);
}

std::vector<ChainSample> read_samples_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_samples_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("read_samples_csv: missing header in " + path);
  }
  std::vector<ChainSample> samples;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    ChainSample s;
    try {
      std::getline(row, field, ',');
      s.iter = std::stol(field);
      std::getline(row, field, ',');
      s.fidelity = std::stol(field);
      std::getline(row, field, ',');
      s.sign = std::stoi(field);
      std::getline(row, field, ',');
      s.cum_cost = std::stod(field);
      while (std::getline(row, field, ',')) s.theta.push_back(std::stod(field));
    } catch (const std::exception&) {
      throw std::runtime_error("read_samples_csv: malformed row at line " +
                               std::to_string(line_no));
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

void write_json_atomic(const nlohmann::json& doc, const std::string& path) {
  const std::string tmp = path + ".tmp";
  std::ofstream out(tmp, std::ios::trunc);
  if (!out) throw std::runtime_error("write_json_atomic: cannot open " + tmp);
  out << doc.dump(2) << "\n";
  out.close();
  if (!out) throw std::runtime_error("write_json_atomic: write failed for " + path);
  commit_file(tmp, path);
}

}  // namespace mfmc
