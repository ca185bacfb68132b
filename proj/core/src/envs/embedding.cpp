#include "ors/envs/embedding.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ors/common/error.hpp"

namespace ors::envs {

namespace {

std::vector<double> to_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

std::size_t EmbeddedDataset::trajectory_end_of(std::size_t i) const {
  auto it = std::upper_bound(offsets.begin(), offsets.end(), i);
  if (it == offsets.end()) throw std::out_of_range("tuple index past the dataset");
  return *it;
}

Eigen::VectorXd EmbeddedDataset::future_state(std::size_t i, long k) const {
  if (k < 1) throw std::invalid_argument("future offset must be at least 1");
  const std::size_t last = trajectory_end_of(i) - 1;
  const std::size_t j = std::min(last, i + static_cast<std::size_t>(k) - 1);
  return s_next.col(static_cast<Eigen::Index>(j));
}

Eigen::VectorXd one_hot(int index, int size) {
  if (index < 0 || index >= size) throw ShapeError("one-hot index out of range");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(size);
  v(index) = 1.0;
  return v;
}

EmbeddedDataset embed(const DeterministicMdp& mdp, const OfflineDataset& data) {
  const auto n = static_cast<Eigen::Index>(data.size());
  EmbeddedDataset out;
  out.s.resize(mdp.embedding_dim(), n);
  out.s_next.resize(mdp.embedding_dim(), n);
  out.a = Eigen::MatrixXd::Zero(mdp.num_actions(), n);
  out.a_next = Eigen::MatrixXd::Zero(mdp.num_actions(), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& tr = data.tuples[static_cast<std::size_t>(i)];
    out.s.col(i) = mdp.embedding(tr.s);
    out.s_next.col(i) = mdp.embedding(tr.s_next);
    out.a(tr.a, i) = 1.0;
    out.a_next(tr.a_next, i) = 1.0;
    out.traj_id.push_back(tr.traj_id);
    out.t.push_back(tr.t);
  }
  out.offsets = data.offsets;
  return out;
}

void write_jsonl(const EmbeddedDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    nlohmann::json line{{"traj_id", data.traj_id[i]},
                        {"t", data.t[i]},
                        {"s", to_vec(data.s.col(c))},
                        {"a", to_vec(data.a.col(c))},
                        {"s_next", to_vec(data.s_next.col(c))},
                        {"a_next", to_vec(data.a_next.col(c))}};
    out << line.dump() << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

EmbeddedDataset read_embedded_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<std::vector<double>> s, a, sn, an;
  EmbeddedDataset out;
  std::string text;
  int line = 0;
  int current = -1;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    try {
      auto j = nlohmann::json::parse(text);
      const int id = j.at("traj_id").get<int>();
      if (id != current && current >= 0) out.offsets.push_back(out.traj_id.size());
      current = id;
      out.traj_id.push_back(id);
      out.t.push_back(j.at("t").get<int>());
      s.push_back(j.at("s").get<std::vector<double>>());
      a.push_back(j.at("a").get<std::vector<double>>());
      sn.push_back(j.at("s_next").get<std::vector<double>>());
      an.push_back(j.at("a_next").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(e.what(), line);
    }
    if (s.back().size() != s.front().size() || sn.back().size() != s.front().size() ||
        a.back().size() != a.front().size() || an.back().size() != a.front().size())
      throw ParseError("inconsistent state or action width", line);
  }
  if (current >= 0) out.offsets.push_back(out.traj_id.size());
  auto pack = [](const std::vector<std::vector<double>>& cols) {
    Eigen::MatrixXd m(cols.empty() ? 0 : static_cast<Eigen::Index>(cols.front().size()),
                      static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
      m.col(static_cast<Eigen::Index>(j)) =
          Eigen::Map<const Eigen::VectorXd>(cols[j].data(), static_cast<Eigen::Index>(cols[j].size()));
    return m;
  };
  out.s = pack(s);
  out.a = pack(a);
  out.s_next = pack(sn);
  out.a_next = pack(an);
  return out;
}

}  // namespace ors::envs
