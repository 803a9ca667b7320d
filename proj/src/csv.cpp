#include "nlasso/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nlasso/error.hpp"
#include "nlasso/experiments.hpp"

namespace nlasso {

std::string csv_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void atomic_write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + tmp + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::IoFailure, "write to " + tmp + " failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error(ErrorCode::IoFailure, "cannot move " + tmp + " to " + path);
}

std::string read_whole_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

double parse_double(const std::string& s, const std::string& path, int line_no) {
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw Error(ErrorCode::ParseFailure,
                path + ":" + std::to_string(line_no) + ": bad number '" + s + "'");
  return value;
}

int parse_int(const std::string& s, const std::string& path, int line_no) {
  char* end = nullptr;
  const long value = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0')
    throw Error(ErrorCode::ParseFailure,
                path + ":" + std::to_string(line_no) + ": bad integer '" + s + "'");
  return static_cast<int>(value);
}

} // namespace

std::vector<TrialRecord> read_results_csv(const std::string& path) {
  std::istringstream in(read_whole_file(path));
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorCode::ParseFailure, path + ": empty file");
  if (line != "sigma,M,lambda,trial,tv_error,node_error,iters,K,L,kappa")
    throw Error(ErrorCode::ParseFailure, path + ": unexpected header '" + line + "'");

  std::vector<TrialRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 10)
      throw Error(ErrorCode::ParseFailure,
                  path + ":" + std::to_string(line_no) + ": expected 10 fields");
    TrialRecord r;
    r.sigma = parse_double(fields[0], path, line_no);
    r.m_size = parse_int(fields[1], path, line_no);
    r.lambda = parse_double(fields[2], path, line_no);
    r.trial = parse_int(fields[3], path, line_no);
    r.tv_error = parse_double(fields[4], path, line_no);
    r.node_error = parse_double(fields[5], path, line_no);
    r.iters = parse_int(fields[6], path, line_no);
    r.K = parse_double(fields[7], path, line_no);
    r.L = parse_double(fields[8], path, line_no);
    r.kappa = parse_double(fields[9], path, line_no);
    records.push_back(r);
  }
  return records;
}

} // namespace nlasso
