#include "irlsum/checkpoint.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace irlsum {

namespace {

constexpr int kVersion = 1;

std::string hex64(uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

nlohmann::json matrix_rows(const PolicyParams& p, size_t off, size_t rows, size_t cols) {
  nlohmann::json out = nlohmann::json::array();
  for (size_t r = 0; r < rows; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (size_t c = 0; c < cols; ++c) row.push_back(p.data[off + r * cols + c]);
    out.push_back(std::move(row));
  }
  return out;
}

void read_matrix(const nlohmann::json& m, PolicyParams& p, size_t off, size_t rows, size_t cols,
                 const char* name) {
  if (!m.is_array() || m.size() != rows) {
    throw std::runtime_error(std::string("checkpoint: bad shape for ") + name);
  }
  for (size_t r = 0; r < rows; ++r) {
    const auto& row = m[r];
    if (!row.is_array() || row.size() != cols) {
      throw std::runtime_error(std::string("checkpoint: bad shape for ") + name);
    }
    for (size_t c = 0; c < cols; ++c) p.data[off + r * cols + c] = row[c].get<double>();
  }
}

}  // namespace

std::string checkpoint_json(const ModelState& model) {
  const PolicyParams& p = model.params;
  const size_t v = static_cast<size_t>(p.vocab_size);
  const size_t d = static_cast<size_t>(p.dim);
  nlohmann::json j;
  j["format"] = "irlsum-checkpoint";
  j["version"] = kVersion;
  j["dim"] = p.dim;
  j["vocab_size"] = p.vocab_size;
  j["vocab"] = model.vocab.tokens();
  j["vocab_hash"] = hex64(model.vocab.content_hash());
  nlohmann::json params;
  params["embedding"] = matrix_rows(p, p.embedding_off(), v, d);
  params["w_in"] = matrix_rows(p, p.w_in_off(), d, 2 * d);
  params["w_rec"] = matrix_rows(p, p.w_rec_off(), d, d);
  nlohmann::json bias = nlohmann::json::array();
  for (size_t i = 0; i < d; ++i) bias.push_back(p.data[p.bias_off() + i]);
  params["bias"] = std::move(bias);
  params["w_out"] = matrix_rows(p, p.w_out_off(), v, d);
  j["params"] = std::move(params);
  if (model.phi) {
    nlohmann::json phi = nlohmann::json::array();
    for (double w : model.phi->phi) phi.push_back(w);
    j["phi"] = std::move(phi);
  }
  return j.dump(1) + "\n";
}

void save_checkpoint(const ModelState& model, const std::string& path) {
  // Write-temp then rename so a crash can never leave a half-written file.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + tmp);
    out << checkpoint_json(model);
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot move checkpoint into place: " + path);
}

ModelState load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw std::runtime_error("checkpoint: malformed JSON: " + path);
  if (j.value("format", "") != "irlsum-checkpoint") {
    throw std::runtime_error("checkpoint: unrecognized format: " + path);
  }
  if (j.value("version", -1) != kVersion) {
    throw std::runtime_error("checkpoint: unsupported version: " + path);
  }

  ModelState model;
  const int dim = j.at("dim").get<int>();
  const int vocab_size = j.at("vocab_size").get<int>();
  const auto& vocab_tokens = j.at("vocab");
  if (!vocab_tokens.is_array() || static_cast<int>(vocab_tokens.size()) != vocab_size) {
    throw std::runtime_error("checkpoint: vocab size mismatch: " + path);
  }
  for (size_t i = Vocab::kReserved; i < vocab_tokens.size(); ++i) {
    model.vocab.add(vocab_tokens[i].get<std::string>());
  }
  if (hex64(model.vocab.content_hash()) != j.at("vocab_hash").get<std::string>()) {
    throw std::runtime_error("checkpoint: vocab hash mismatch: " + path);
  }

  PolicyParams p = PolicyParams::init(vocab_size, dim, 0);
  const size_t v = static_cast<size_t>(vocab_size);
  const size_t d = static_cast<size_t>(dim);
  const auto& params = j.at("params");
  read_matrix(params.at("embedding"), p, p.embedding_off(), v, d, "embedding");
  read_matrix(params.at("w_in"), p, p.w_in_off(), d, 2 * d, "w_in");
  read_matrix(params.at("w_rec"), p, p.w_rec_off(), d, d, "w_rec");
  const auto& bias = params.at("bias");
  if (!bias.is_array() || bias.size() != d) throw std::runtime_error("checkpoint: bad bias shape");
  for (size_t i = 0; i < d; ++i) p.data[p.bias_off() + i] = bias[i].get<double>();
  read_matrix(params.at("w_out"), p, p.w_out_off(), v, d, "w_out");
  model.params = std::move(p);

  if (j.contains("phi")) {
    const auto& phi = j["phi"];
    if (!phi.is_array() || phi.size() != 4) throw std::runtime_error("checkpoint: bad phi shape");
    RewardWeights w;
    for (size_t k = 0; k < 4; ++k) w.phi[k] = phi[k].get<double>();
    model.phi = w;
  }
  return model;
}

}  // namespace irlsum
