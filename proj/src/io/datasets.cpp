#include "mfmc/io/datasets.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace mfmc {

namespace {

std::string strip(const std::string& s) {
  const auto lo = s.find_first_not_of(" \t\r\n");
  if (lo == std::string::npos) return {};
  const auto hi = s.find_last_not_of(" \t\r\n");
  return s.substr(lo, hi - lo + 1);
}

}  // namespace

Vector load_coal_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_coal_dataset: cannot open " + path);
  Vector events;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = strip(line);
    if (line.empty()) continue;
    try {
      std::size_t pos = 0;
      const double t = std::stod(line, &pos);
      if (pos != line.size()) throw std::invalid_argument(line);
      events.push_back(t);
    } catch (const std::exception&) {
      throw std::runtime_error("load_coal_dataset: malformed value at line " +
                               std::to_string(line_no) + ": '" + line + "'");
    }
  }
  if (events.empty()) {
    throw std::runtime_error("load_coal_dataset: no events in " + path);
  }
  std::sort(events.begin(), events.end());
  if (events.size() != 191) {
    std::cerr << "load_coal_dataset: warning: expected 191 events, got "
              << events.size() << "\n";
  }
  return events;
}

LynxHareDataset load_lynx_hare(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_lynx_hare: cannot open " + path);
  LynxHareDataset out;
  std::string line;
  long line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip(line);
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;  // first nonempty line is the header
      continue;
    }
    std::istringstream row(line);
    std::string year_s, hare_s, lynx_s;
    if (!std::getline(row, year_s, ',') || !std::getline(row, hare_s, ',') ||
        !std::getline(row, lynx_s)) {
      throw std::runtime_error("load_lynx_hare: malformed row at line " +
                               std::to_string(line_no));
    }
    try {
      out.years.push_back(std::stol(strip(year_s)));
      out.hare.push_back(std::stod(strip(hare_s)));
      out.lynx.push_back(std::stod(strip(lynx_s)));
    } catch (const std::exception&) {
      throw std::runtime_error("load_lynx_hare: malformed number at line " +
                               std::to_string(line_no));
    }
  }
  if (out.years.empty()) {
    throw std::runtime_error("load_lynx_hare: no rows in " + path);
  }
  if (out.years.size() != 21) {
    std::cerr << "load_lynx_hare: warning: expected 21 rows, got "
              << out.years.size() << "\n";
  }
  return out;
}

}  // namespace mfmc
