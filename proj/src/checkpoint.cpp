#include "dem/checkpoint.hpp"

#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace dem::io {

using nlohmann::json;

namespace {

json config_to_json(const nn::MlpConfig& c) {
  return json{{"input_dim", c.input_dim},
              {"output_dim", c.output_dim},
              {"hidden", c.hidden},
              {"activation", nn::to_string(c.activation)},
              {"seed", c.seed}};
}

nn::MlpConfig config_from_json(const json& j) {
  nn::MlpConfig c;
  c.input_dim = j.at("input_dim").get<int>();
  c.output_dim = j.at("output_dim").get<int>();
  c.hidden = j.at("hidden").get<std::vector<int>>();
  c.activation = nn::activation_from_string(j.at("activation").get<std::string>());
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

}  // namespace

void save_checkpoint(const std::string& path,
                     const std::vector<nn::MlpConfig>& configs,
                     const std::vector<nn::MlpParams>& params) {
  json nets = json::array();
  for (std::size_t n = 0; n < params.size(); ++n) {
    json layers = json::array();
    for (std::size_t l = 0; l < params[n].weights.size(); ++l) {
      const auto& w = params[n].weights[l];
      json rows = json::array();
      for (Eigen::Index r = 0; r < w.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < w.cols(); ++c) row.push_back(w(r, c));
        rows.push_back(std::move(row));
      }
      json b = json::array();
      for (Eigen::Index r = 0; r < params[n].biases[l].size(); ++r)
        b.push_back(params[n].biases[l][r]);
      layers.push_back(json{{"w", std::move(rows)}, {"b", std::move(b)}});
    }
    nets.push_back(
        json{{"config", config_to_json(configs[n])}, {"layers", layers}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << json{{"nets", std::move(nets)}}.dump(1) << '\n';
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  json j;
  in >> j;
  Checkpoint ck;
  for (const auto& net : j.at("nets")) {
    ck.configs.push_back(config_from_json(net.at("config")));
    nn::MlpParams p;
    for (const auto& layer : net.at("layers")) {
      const auto& rows = layer.at("w");
      Eigen::MatrixXd w(rows.size(), rows.empty() ? 0 : rows[0].size());
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
          w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
              rows[r][c].get<double>();
      const auto& bj = layer.at("b");
      Eigen::VectorXd b(bj.size());
      for (std::size_t r = 0; r < bj.size(); ++r)
        b[static_cast<Eigen::Index>(r)] = bj[r].get<double>();
      p.weights.push_back(std::move(w));
      p.biases.push_back(std::move(b));
    }
    ck.params.push_back(std::move(p));
  }
  return ck;
}

}  // namespace dem::io
