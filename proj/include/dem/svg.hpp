#pragma once

// Self-contained SVG charts: loss curves, 1d field comparisons, colored
// field maps over scattered nodes, and mean/std band charts for the layer
// diagnostics. No external plotting dependencies.

#include <Eigen/Core>
#include <string>
#include <vector>

namespace dem::plot {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

void line_chart(const std::string& path, const std::string& title,
                const std::string& xlabel, const std::string& ylabel,
                const std::vector<Series>& series);

// Scattered field rendered as colored cells whose size tracks the local
// node weight; suitable for both grids and the graded hole layout.
void field_map(const std::string& path, const std::string& title,
               const Eigen::MatrixXd& pts, const Eigen::VectorXd& weights,
               const Eigen::VectorXd& values);

struct Band {
  std::string label;
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> stdev;
};

void band_chart(const std::string& path, const std::string& title,
                const std::string& xlabel, const std::vector<Band>& bands);

}  // namespace dem::plot
