#include "coocmatch/batch.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "coocmatch/config.hpp"
#include "coocmatch/parallel.hpp"
#include "coocmatch/png_io.hpp"

namespace coocmatch {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string indexed_name(const std::string& dir, const char* stem, int i,
                         const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s_%04d%s", stem, i, ext);
  return dir + "/" + buf;
}

const std::string& path_at(const std::vector<std::string>& paths, int idx,
                           const char* what) {
  if (idx < 0 || idx >= static_cast<int>(paths.size()))
    throw std::runtime_error(std::string("pairing plan has no ") + what +
                             " path for index " + std::to_string(idx));
  return paths[idx];
}

// Input and attack errors mark the item failed; output errors propagate
// and abort the run.
ItemResult run_one(const BatchItem& item, AttackConfig cfg,
                   std::uint64_t seed) {
  ItemResult res;
  res.item = item;
  res.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();

  AttackResult attack;
  try {
    ImageBuffer source = load_png(item.source);
    ImageBuffer target = load_png(item.target);
    cfg.seed = seed;
    attack = run_attack(source, target, cfg);
  } catch (const std::exception& e) {
    res.status = "failed";
    res.error = e.what();
    res.seconds = seconds_since(t0);
    return res;
  }

  save_png(attack.adversarial, item.output);
  if (!item.trace.empty()) {
    std::ofstream out(item.trace);
    if (!out)
      throw std::runtime_error("cannot open for write: " + item.trace);
    write_trace_csv(attack.trace, out);
  }

  res.status = "ok";
  res.final_hist_l1 = attack.final_hist_l1;
  res.final_image_l1 = attack.final_image_l1;
  res.seconds = seconds_since(t0);
  return res;
}

}  // namespace

int RunManifest::failed_count() const {
  int n = 0;
  for (const auto& item : items)
    if (item.status != "ok") ++n;
  return n;
}

RunManifest batch_attack(const PairingPlan& plan, const AttackConfig& cfg,
                         const std::string& out_dir, int jobs) {
  RunManifest manifest;
  manifest.command = "attack-cooc";
  manifest.config_json = attack_config_to_json(cfg);
  manifest.master_seed = cfg.seed;
  manifest.items.resize(plan.entries.size());

  parallel_for(static_cast<int>(plan.entries.size()), jobs, [&](int i) {
    const PairingEntry& e = plan.entries[i];
    BatchItem item;
    item.source = path_at(plan.source_paths, e.source, "source");
    item.target = path_at(plan.target_paths, e.target, "target");
    item.output = indexed_name(out_dir, "adv", i, ".png");
    item.trace = indexed_name(out_dir, "trace", i, ".csv");
    manifest.items[i] = run_one(item, cfg, cfg.seed + static_cast<std::uint64_t>(i));
  });
  return manifest;
}

RunManifest replay_manifest(const RunManifest& manifest, int jobs) {
  const AttackConfig cfg = attack_config_from_json(manifest.config_json);
  RunManifest out;
  out.command = manifest.command;
  out.config_json = manifest.config_json;
  out.master_seed = manifest.master_seed;
  out.items.resize(manifest.items.size());

  parallel_for(static_cast<int>(manifest.items.size()), jobs, [&](int i) {
    out.items[i] =
        run_one(manifest.items[i].item, cfg, manifest.items[i].seed);
  });
  return out;
}

void write_manifest_file(const RunManifest& manifest,
                         const std::string& path) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& r : manifest.items)
    items.push_back({{"source", r.item.source},
                     {"target", r.item.target},
                     {"output", r.item.output},
                     {"trace", r.item.trace},
                     {"status", r.status},
                     {"error", r.error},
                     {"seconds", r.seconds},
                     {"seed", r.seed},
                     {"final_hist_l1", r.final_hist_l1},
                     {"final_image_l1", r.final_image_l1}});
  nlohmann::json doc = {
      {"command", manifest.command},
      {"master_seed", manifest.master_seed},
      {"config", manifest.config_json.empty()
                     ? nlohmann::json::object()
                     : nlohmann::json::parse(manifest.config_json)},
      {"items", items}};

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot open for write: " + tmp);
    out << doc.dump(2) << "\n";
    out.close();
    if (out.fail()) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed: " + path);
}

RunManifest read_manifest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  nlohmann::json doc = nlohmann::json::parse(in);

  RunManifest manifest;
  manifest.command = doc.at("command").get<std::string>();
  manifest.master_seed = doc.at("master_seed").get<std::uint64_t>();
  manifest.config_json = doc.at("config").dump(2);
  for (const auto& j : doc.at("items")) {
    ItemResult r;
    r.item.source = j.at("source").get<std::string>();
    r.item.target = j.at("target").get<std::string>();
    r.item.output = j.at("output").get<std::string>();
    r.item.trace = j.value("trace", std::string());
    r.status = j.value("status", std::string());
    r.error = j.value("error", std::string());
    r.seconds = j.value("seconds", 0.0);
    r.seed = j.value("seed", 0ull);
    r.final_hist_l1 = j.value("final_hist_l1", 0.0);
    r.final_image_l1 = j.value("final_image_l1", 0.0);
    manifest.items.push_back(r);
  }
  return manifest;
}

}  // namespace coocmatch
