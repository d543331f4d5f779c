#include "catdcov/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "catdcov/errors.hpp"
#include "json.hpp"

namespace catdcov {

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return in;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) return out;
    start = comma + 1;
  }
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  throw InputError(source + ":" + std::to_string(line) + ": " + what);
}

int parse_label(const std::string& field, const std::string& source, std::size_t line) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
    fail(source, line, "'" + field + "' is not an integer label");
  if (v < 1) fail(source, line, "label " + field + " is below 1");
  return v;
}

double parse_real(const std::string& field, const std::string& source, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    fail(source, line, "'" + field + "' is not a number");
  }
}

// Calls row(fields, line_number) for each non-blank line after the header.
template <class Row>
void for_each_row(std::istream& in, const std::string& source, Row&& row) {
  std::string line;
  std::size_t number = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    row(split(line), number);
  }
  if (header) throw InputError(source + ": empty file (a header row is required)");
}

}  // namespace

SampleData read_sample_csv(std::istream& in, const std::string& source) {
  SampleData d;
  for_each_row(in, source, [&](const std::vector<std::string>& f, std::size_t line) {
    if (f.size() != 2) fail(source, line, "expected 2 columns, found " + std::to_string(f.size()));
    const int x = parse_label(f[0], source, line);
    const int y = parse_label(f[1], source, line);
    d.sample.x.push_back(x);
    d.sample.y.push_back(y);
    d.rows = std::max(d.rows, static_cast<std::size_t>(x));
    d.cols = std::max(d.cols, static_cast<std::size_t>(y));
  });
  if (d.sample.size() == 0) throw InputError(source + ": no observations");
  return d;
}

SampleData read_sample_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_sample_csv(in, path.string());
}

FeatureMatrix read_feature_csv(std::istream& in, const std::string& source) {
  std::vector<int> response;
  std::vector<std::vector<int>> features;
  std::size_t width = 0;
  for_each_row(in, source, [&](const std::vector<std::string>& f, std::size_t line) {
    if (width == 0) {
      if (f.size() < 2) fail(source, line, "expected a response column and at least one feature column");
      width = f.size();
      features.resize(width - 1);
    } else if (f.size() != width) {
      fail(source, line, "expected " + std::to_string(width) + " columns, found " + std::to_string(f.size()));
    }
    response.push_back(parse_label(f[0], source, line));
    for (std::size_t k = 1; k < width; ++k) features[k - 1].push_back(parse_label(f[k], source, line));
  });
  if (response.empty()) throw InputError(source + ": no observations");
  return FeatureMatrix(std::move(response), std::move(features));
}

FeatureMatrix read_feature_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_feature_csv(in, path.string());
}

std::vector<double> read_stats_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<double> out;
  for_each_row(in, path.string(), [&](const std::vector<std::string>& f, std::size_t line) {
    out.push_back(parse_real(f[0], path.string(), line));
  });
  if (out.empty()) throw InputError(path.string() + ": no statistics");
  return out;
}

std::vector<bool> read_truth_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<bool> out;
  for_each_row(in, path.string(), [&](const std::vector<std::string>& f, std::size_t line) {
    if (f[0] != "0" && f[0] != "1") fail(path.string(), line, "relevance flag must be 0 or 1");
    out.push_back(f[0] == "1");
  });
  return out;
}

JointPMF parse_pmf_json(const std::string& text, const std::string& source) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object() || !j.contains("probs")) throw InputError(source + ": expected an object with key \"probs\"");
    return JointPMF::from_rows(j.at("probs").get<std::vector<std::vector<double>>>());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(source + ": " + e.what());
  } catch (const InputError& e) {
    const std::string msg = e.what();
    throw InputError(msg.rfind(source, 0) == 0 ? msg : source + ": " + msg);
  }
}

JointPMF read_pmf_json(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_pmf_json(buf.str(), path.string());
}

void write_influence_csv(const InfluenceSurface& s, std::ostream& out) {
  char buf[40];
  out << "x,y,value\n";
  for (std::size_t r = 0; r < s.rows; ++r)
    for (std::size_t c = 0; c < s.cols; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", s.at(r, c));
      out << r + 1 << ',' << c + 1 << ',' << buf << '\n';
    }
}

std::string screening_report_json(const ScreeningReport& r) {
  nlohmann::ordered_json j;
  j["estimator"] = to_string(r.estimator);
  j["selector"] = to_string(r.selector);
  j["K"] = r.stats.size();
  j["constant_response"] = r.constant_response;
  j["threshold_maxratio"] = r.threshold_maxratio ? nlohmann::ordered_json(*r.threshold_maxratio) : nullptr;
  j["threshold_changepoint"] = r.changepoint ? nlohmann::ordered_json(r.changepoint->threshold) : nullptr;
  j["breakpoint_rank"] = r.changepoint ? nlohmann::ordered_json(r.changepoint->breakpoint_rank) : nullptr;
  auto one_based = [](const std::vector<std::size_t>& v) {
    std::vector<std::size_t> out(v);
    for (auto& k : out) ++k;
    return out;
  };
  j["selected"] = one_based(r.selected);
  j["order"] = one_based(r.order);
  j["stats"] = r.stats;
  return j.dump(2) + "\n";
}

}  // namespace catdcov
