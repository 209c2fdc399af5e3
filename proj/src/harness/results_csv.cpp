#include "cbo/harness/results_csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cbo::harness {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& text) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("results csv: bad number '" + text + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(line);
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::string results_csv(const std::vector<engine::RunRecord>& records, Eigen::Index dim) {
  std::ostringstream out;
  out << "seed,step,task_set";
  for (Eigen::Index i = 0; i < dim; ++i) out << ",x" << i;
  out << ",spent,oc";
  for (Eigen::Index i = 0; i < dim; ++i) out << ",r" << i;
  out << '\n';
  for (const auto& rec : records) {
    for (const auto& row : rec.rows) {
      out << rec.seed << ',' << row.step << ',';
      for (std::size_t t = 0; t < row.tasks.size(); ++t) out << (t ? "|" : "") << row.tasks[t];
      for (Eigen::Index i = 0; i < dim; ++i) out << ',' << format_double(row.location[i]);
      out << ',' << format_double(row.spent) << ',' << format_double(row.oc);
      for (Eigen::Index i = 0; i < dim; ++i) out << ',' << format_double(row.recommended[i]);
      out << '\n';
    }
  }
  return out.str();
}

void write_results(const std::filesystem::path& path, const std::vector<engine::RunRecord>& records,
                   Eigen::Index dim) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << results_csv(records, dim);
}

std::vector<engine::RunRecord> parse_results(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("results csv: missing header");
  const auto header = split(line, ',');
  if (header.size() < 5 || header[0] != "seed" || (header.size() - 5) % 2 != 0) {
    throw std::invalid_argument("results csv: unexpected header");
  }
  const auto dim = static_cast<Eigen::Index>((header.size() - 5) / 2);
  std::vector<engine::RunRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) throw std::invalid_argument("results csv: ragged row");
    const auto seed = std::stoull(cells[0]);
    if (records.empty() || records.back().seed != seed) {
      records.emplace_back();
      records.back().seed = seed;
    }
    engine::StepRow row;
    row.step = std::stoi(cells[1]);
    for (const auto& t : split(cells[2], '|')) row.tasks.push_back(std::stoul(t));
    row.location.resize(dim);
    row.recommended.resize(dim);
    for (Eigen::Index i = 0; i < dim; ++i) row.location[i] = parse_double(cells[3 + i]);
    row.spent = parse_double(cells[3 + dim]);
    row.oc = parse_double(cells[4 + dim]);
    for (Eigen::Index i = 0; i < dim; ++i) row.recommended[i] = parse_double(cells[5 + dim + i]);
    records.back().rows.push_back(std::move(row));
  }
  return records;
}

std::vector<engine::RunRecord> read_results(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_results(ss.str());
}

}  // namespace cbo::harness
