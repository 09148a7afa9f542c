#include "coocmatch/config.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

namespace coocmatch {

std::string attack_config_to_json(const AttackConfig& cfg) {
  nlohmann::json epochs = nlohmann::json::array();
  for (const auto& e : cfg.epochs)
    epochs.push_back({{"steps", e.steps}, {"noise_sigma", e.noise_sigma}});
  nlohmann::json geoms = nlohmann::json::array();
  for (const auto& g : cfg.geometries) geoms.push_back(to_string(g));

  nlohmann::json doc = {{"lambda", cfg.lambda},
                        {"lr", cfg.lr},
                        {"momentum", cfg.momentum},
                        {"epochs", epochs},
                        {"kernel", to_string(cfg.kernel)},
                        {"geometries", geoms},
                        {"pyramid_levels", cfg.pyramid.levels},
                        {"seed", cfg.seed},
                        {"persist_noise", cfg.persist_noise},
                        {"grad_scale", cfg.grad_scale}};
  return doc.dump(2);
}

AttackConfig attack_config_from_json(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text);
  if (!doc.is_object())
    throw std::runtime_error("attack config: expected a JSON object");

  AttackConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "lambda") {
      cfg.lambda = value.get<double>();
    } else if (key == "lr") {
      cfg.lr = value.get<double>();
    } else if (key == "momentum") {
      cfg.momentum = value.get<double>();
    } else if (key == "epochs") {
      cfg.epochs.clear();
      for (const auto& e : value) {
        AttackEpoch epoch;
        for (const auto& [ek, ev] : e.items()) {
          if (ek == "steps") epoch.steps = ev.get<int>();
          else if (ek == "noise_sigma") epoch.noise_sigma = ev.get<double>();
          else throw std::runtime_error("unknown epoch key: " + ek);
        }
        cfg.epochs.push_back(epoch);
      }
    } else if (key == "kernel") {
      cfg.kernel = parse_kernel(value.get<std::string>());
    } else if (key == "geometries") {
      cfg.geometries.clear();
      for (const auto& g : value)
        cfg.geometries.push_back(parse_geometry(g.get<std::string>()));
    } else if (key == "pyramid_levels") {
      cfg.pyramid.levels = value.get<int>();
    } else if (key == "seed") {
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "persist_noise") {
      cfg.persist_noise = value.get<bool>();
    } else if (key == "grad_scale") {
      cfg.grad_scale = value.get<double>();
    } else {
      throw std::runtime_error("unknown config key: " + key);
    }
  }
  return cfg;
}

}  // namespace coocmatch
