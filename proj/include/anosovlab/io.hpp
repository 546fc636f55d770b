#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "anosovlab/families.hpp"
#include "anosovlab/matgap.hpp"
#include "anosovlab/models.hpp"

namespace anosov::io {

// fixed 17-significant-digit decimal form, for byte-reproducible outputs
std::string format_double(double x);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);
  void close();

 private:
  std::ofstream out_;
  std::size_t width_;
};

struct SvgPoint {
  double x, y;
};

// minimal scatter/polyline emission; no timestamps or other run metadata
void write_svg_scatter(const std::string& path, const std::vector<SvgPoint>& points,
                       const std::string& x_label, const std::string& y_label,
                       bool connect = false);

// representation config: {"degree": d, "generators": {name: [[row]..]},
//  "model": {"type": "fuchsian"|"tree", "generators": {...}}}
struct RepConfig {
  matgap::Representation rep;
  models::ModelSpace model;
};
RepConfig load_rep_config(const std::string& path);
void save_rep_config(const std::string& path, const matgap::Representation& rep,
                     const models::ModelSpace& model);

}  // namespace anosov::io
