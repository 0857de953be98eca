#include "mmsb/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mmsb {

void save_checkpoint(const std::map<std::string, Tensor>& tensors,
                     const std::string& path) {
  nlohmann::json j;
  j["format"] = "MMSB-CKPT-1";
  nlohmann::json entries = nlohmann::json::object();
  for (const auto& [name, t] : tensors) {
    entries[name] = {{"shape", t.shape()}, {"values", t.values()}};
  }
  j["tensors"] = std::move(entries);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out << j.dump();
}

std::map<std::string, Tensor> load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read checkpoint: " + path);
  nlohmann::json j;
  in >> j;
  if (j.value("format", "") != std::string("MMSB-CKPT-1"))
    throw std::runtime_error("unknown checkpoint format in " + path);
  std::map<std::string, Tensor> out;
  for (const auto& [name, entry] : j.at("tensors").items()) {
    out.emplace(name,
                Tensor::from_values(entry.at("shape").get<std::vector<int>>(),
                                    entry.at("values").get<std::vector<double>>(),
                                    /*requires_grad=*/true));
  }
  return out;
}

}  // namespace mmsb
