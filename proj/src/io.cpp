#include "anosovlab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "anosovlab/errors.hpp"

namespace anosov::io {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), width_(header.size()) {
  if (!out_) throw IoError("cannot open " + path + " for writing");
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw IoError("csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << "\n";
  if (!out_) throw IoError("csv write failed");
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw IoError("csv close failed");
}

void write_svg_scatter(const std::string& path, const std::vector<SvgPoint>& points,
                       const std::string& x_label, const std::string& y_label,
                       bool connect) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const int w = 640, h = 480, margin = 48;
  double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  if (!points.empty()) {
    x_lo = x_hi = points[0].x;
    y_lo = y_hi = points[0].y;
    for (const auto& p : points) {
      x_lo = std::min(x_lo, p.x);
      x_hi = std::max(x_hi, p.x);
      y_lo = std::min(y_lo, p.y);
      y_hi = std::max(y_hi, p.y);
    }
  }
  if (x_hi <= x_lo) x_hi = x_lo + 1;
  if (y_hi <= y_lo) y_hi = y_lo + 1;
  auto px = [&](double x) { return margin + (w - 2 * margin) * (x - x_lo) / (x_hi - x_lo); };
  auto py = [&](double y) { return h - margin - (h - 2 * margin) * (y - y_lo) / (y_hi - y_lo); };
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << h - margin << "\" x2=\"" << w - margin
      << "\" y2=\"" << h - margin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
      << h - margin << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"" << h - 12 << "\" font-size=\"12\">" << x_label
      << "</text>\n";
  out << "<text x=\"12\" y=\"" << h / 2 << "\" font-size=\"12\" transform=\"rotate(-90 12 "
      << h / 2 << ")\">" << y_label << "</text>\n";
  if (connect && points.size() > 1) {
    out << "<polyline fill=\"none\" stroke=\"steelblue\" points=\"";
    for (const auto& p : points) out << px(p.x) << "," << py(p.y) << " ";
    out << "\"/>\n";
  }
  for (const auto& p : points)
    out << "<circle cx=\"" << px(p.x) << "\" cy=\"" << py(p.y)
        << "\" r=\"2\" fill=\"steelblue\"/>\n";
  out << "</svg>\n";
  if (!out) throw IoError("svg write failed");
}

namespace {

nlohmann::json matrix_to_json(const matgap::Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

matgap::Matrix matrix_from_json(const nlohmann::json& j) {
  const int rows = static_cast<int>(j.size());
  if (rows == 0) throw InputError("rep config: empty matrix");
  const int cols = static_cast<int>(j.at(0).size());
  matgap::Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j.at(r).size()) != cols)
      throw InputError("rep config: ragged matrix");
    for (int c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
  }
  return m;
}

words::Presentation presentation_for(const std::vector<std::string>& gen_names) {
  std::vector<std::string> sorted = gen_names;
  std::sort(sorted.begin(), sorted.end());
  if (sorted == std::vector<std::string>{"a1", "a2", "b1", "b2"})
    return words::Presentation::surface_genus2();
  return words::Presentation::free_group(static_cast<int>(gen_names.size()));
}

}  // namespace

RepConfig load_rep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open rep config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("rep config parse error: " + std::string(e.what()));
  }
  try {
    const int degree = j.at("degree").get<int>();
    std::vector<std::string> gen_names;
    std::map<std::string, matgap::Matrix> images;
    for (const auto& [name, mat] : j.at("generators").items()) {
      gen_names.push_back(name);
      images[name] = matrix_from_json(mat);
    }
    words::Presentation p = presentation_for(gen_names);
    const auto& model_j = j.at("model");
    const std::string type = model_j.at("type").get<std::string>();
    if (type == "tree") {
      matgap::Representation rep(p.alphabet, degree, images);
      return RepConfig{std::move(rep), models::ModelSpace::tree(p)};
    }
    if (type != "fuchsian") throw InputError("rep config: unknown model type " + type);
    std::map<std::string, Eigen::Matrix2d> model_gens;
    const auto& mg = model_j.contains("generators") ? model_j.at("generators")
                                                    : j.at("generators");
    for (const auto& [name, mat] : mg.items()) {
      const matgap::Matrix m = matrix_from_json(mat);
      if (m.rows() != 2 || m.cols() != 2)
        throw InputError("rep config: fuchsian model generators must be 2x2");
      model_gens[name] = m;
    }
    matgap::Representation rep(p.alphabet, degree, images);
    return RepConfig{std::move(rep), models::ModelSpace::fuchsian(p, model_gens)};
  } catch (const nlohmann::json::exception& e) {
    throw InputError("rep config: " + std::string(e.what()));
  }
}

void save_rep_config(const std::string& path, const matgap::Representation& rep,
                     const models::ModelSpace& model) {
  nlohmann::json j;
  j["degree"] = rep.degree();
  nlohmann::json gens;
  const auto& a = rep.alphabet();
  for (int l = 0; l < a.size(); ++l) {
    const std::string& name = a.name(static_cast<words::Letter>(l));
    if (name.find("^-1") != std::string::npos) continue;
    gens[name] = matrix_to_json(rep.image(static_cast<words::Letter>(l)));
  }
  j["generators"] = gens;
  if (model.kind() == models::ModelSpace::Kind::Tree) {
    j["model"] = {{"type", "tree"}};
  } else {
    nlohmann::json mg;
    const auto& r1 = model.fuchsian_rep();
    for (int l = 0; l < a.size(); ++l) {
      const std::string& name = a.name(static_cast<words::Letter>(l));
      if (name.find("^-1") != std::string::npos) continue;
      mg[name] = matrix_to_json(r1.image(static_cast<words::Letter>(l)));
    }
    j["model"] = {{"type", "fuchsian"}, {"generators", mg}};
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace anosov::io
