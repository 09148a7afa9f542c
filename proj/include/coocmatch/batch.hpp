#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coocmatch/optimizer.hpp"
#include "coocmatch/pairing.hpp"

namespace coocmatch {

struct BatchItem {
  std::string source;
  std::string target;
  std::string output;  // adversarial PNG
  std::string trace;   // per-step CSV
};

struct ItemResult {
  BatchItem item;
  std::string status;  // "ok" | "failed"
  std::string error;   // set when failed
  double seconds = 0.0;
  std::uint64_t seed = 0;
  double final_hist_l1 = 0.0;
  double final_image_l1 = 0.0;
};

// Record of one batch run: enough to audit it and to re-run it
// bit-identically (command, config snapshot, master seed, per-item paths).
struct RunManifest {
  std::string command;
  std::string config_json;  // serialized config snapshot
  std::uint64_t master_seed = 0;
  std::vector<ItemResult> items;

  int failed_count() const;
};

// Runs one attack per plan entry, writing adv_<idx>.png and
// trace_<idx>.csv into out_dir. Item seeds derive from cfg.seed plus the
// item index. An unreadable input marks that item failed and the run
// continues; an unwritable output aborts the whole run.
RunManifest batch_attack(const PairingPlan& plan, const AttackConfig& cfg,
                         const std::string& out_dir, int jobs);

// Re-run every item of a previous manifest with its recorded config and
// seeds; outputs land on the same paths.
RunManifest replay_manifest(const RunManifest& manifest, int jobs);

// Manifest JSON, written via a temp file + rename so readers never see a
// half-written document.
void write_manifest_file(const RunManifest& manifest, const std::string& path);
RunManifest read_manifest_file(const std::string& path);

}  // namespace coocmatch
