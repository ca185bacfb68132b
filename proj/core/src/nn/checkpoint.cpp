#include "ors/nn/checkpoint.hpp"

#include <fstream>
#include <stdexcept>
#include <vector>

#include "ors/common/error.hpp"

namespace ors::nn {

namespace {

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd from_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

nlohmann::json adam_to_json(const AdamState& adam) {
  return {{"m", to_vector(adam.m)},        {"v", to_vector(adam.v)},   {"step", adam.step},
          {"lr", adam.lr},                 {"beta1", adam.beta1},      {"beta2", adam.beta2},
          {"eps", adam.eps}};
}

nlohmann::json mlp_to_json(const Mlp& net, const AdamState* adam) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : net.layers())
    layers.push_back({{"in", l.in},
                      {"out", l.out},
                      {"activation", l.activation == Activation::gelu ? "gelu" : "identity"},
                      {"layer_norm", l.layer_norm}});
  nlohmann::json doc = {{"format_version", kCheckpointFormatVersion},
                        {"widths", net.widths()},
                        {"layers", layers},
                        {"params", to_vector(net.params())}};
  if (adam) doc["adam"] = adam_to_json(*adam);
  return doc;
}

Mlp mlp_from_json(const nlohmann::json& doc) {
  if (doc.value("format_version", 0) != kCheckpointFormatVersion)
    throw std::runtime_error("checkpoint: unsupported format_version");
  std::vector<LayerSpec> specs;
  for (const auto& l : doc.at("layers")) {
    const auto act = l.at("activation").get<std::string>();
    if (act != "gelu" && act != "identity") throw std::runtime_error("checkpoint: unknown activation " + act);
    specs.push_back({l.at("in").get<int>(), l.at("out").get<int>(),
                     act == "gelu" ? Activation::gelu : Activation::identity, l.at("layer_norm").get<bool>()});
  }
  Mlp net(std::move(specs));
  const auto params = doc.at("params").get<std::vector<double>>();
  if (params.size() != net.num_params())
    throw ShapeError("checkpoint: expected " + std::to_string(net.num_params()) + " parameters, found " +
                     std::to_string(params.size()));
  net.params() = from_vector(params);
  return net;
}

std::optional<AdamState> adam_from_json(const nlohmann::json& doc) {
  const nlohmann::json& a = doc.contains("adam") ? doc.at("adam") : doc;
  if (!a.contains("m")) return std::nullopt;
  AdamState s;
  s.m = from_vector(a.at("m").get<std::vector<double>>());
  s.v = from_vector(a.at("v").get<std::vector<double>>());
  s.step = a.at("step").get<std::int64_t>();
  s.lr = a.at("lr").get<double>();
  s.beta1 = a.at("beta1").get<double>();
  s.beta2 = a.at("beta2").get<double>();
  s.eps = a.at("eps").get<double>();
  if (s.m.size() != s.v.size()) throw ShapeError("checkpoint: Adam moment sizes differ");
  return s;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(1) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return nlohmann::json::parse(in);
}

}  // namespace ors::nn
