#pragma once

// File formats:
//   sample CSV     header "x,y", one integer-labelled observation per line
//   feature CSV    header row, then response followed by K feature labels per line
//   stats CSV      header row, one statistic per line (first column)
//   truth CSV      header row, one 0/1 relevance flag per line
//   pmf JSON       {"probs": [[...], ...]}
// Parse errors are InputError and name the source and line.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "catdcov/influence.hpp"
#include "catdcov/screening.hpp"
#include "catdcov/table.hpp"

namespace catdcov {

struct SampleData {
  PairedSample sample;
  std::size_t rows = 0;  ///< max x label
  std::size_t cols = 0;  ///< max y label
};

SampleData read_sample_csv(std::istream& in, const std::string& source);
SampleData read_sample_csv(const std::filesystem::path& path);

FeatureMatrix read_feature_csv(std::istream& in, const std::string& source);
FeatureMatrix read_feature_csv(const std::filesystem::path& path);

std::vector<double> read_stats_csv(const std::filesystem::path& path);
std::vector<bool> read_truth_csv(const std::filesystem::path& path);

JointPMF parse_pmf_json(const std::string& text, const std::string& source);
JointPMF read_pmf_json(const std::filesystem::path& path);

/// Header "x,y,value" with 1-based labels; singular points print as inf.
void write_influence_csv(const InfluenceSurface& surface, std::ostream& out);

/// Feature indices in the JSON are 1-based.
std::string screening_report_json(const ScreeningReport& report);

}  // namespace catdcov
