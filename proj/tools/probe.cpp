// Temporary measurement harness; not part of the deliverable.
#include <algorithm>
#include <chrono>
#include <cstdio>

#include "mvpano/moving.hpp"
#include "mvpano/synth.hpp"

using namespace mvpano;

int main() {
  auto suite = synth::standard_suite(2024, 50, geom::EquirectGrid(256, 128));
  const auto& seq = suite[45];
  const auto& ref = seq.views[2];
  auto instances = moving::oracle_instances(seq, 2);

  // image-level diff |I' - I_t| per instance, per neighbor
  for (int off : {-2, -1, 1, 2}) {
    auto warped = reproj::reproject_guarded(
        reproj::frame_at(seq.views, 2 + off), ref, 0.2);
    std::printf("neighbor %+d:\n", off);
    for (const auto& inst : instances) {
      double img_diff = 0;
      int valid = 0;
      for (auto p : inst.pixels) {
        valid += warped.valid.data[p];
        for (int c = 0; c < 3; ++c)
          img_diff += std::abs(warped.rgb.data[p * 3 + c] - ref.rgb.data[p * 3 + c]);
      }
      std::printf("  inst %d mov=%d n=%4zu valid=%.2f mean|dI|=%.4f\n", inst.id,
                  (int)seq.motion_labels[inst.id - 1], inst.n(),
                  (double)valid / inst.n(), img_diff / (3.0 * inst.n()));
    }
    // background image diff
    double bg = 0;
    int nbg = 0;
    const auto& im = seq.instance_masks[2];
    for (std::size_t p = 0; p < im.data.size(); ++p) {
      if (im.data[p] != 0) continue;
      ++nbg;
      for (int c = 0; c < 3; ++c)
        bg += std::abs(warped.rgb.data[p * 3 + c] - ref.rgb.data[p * 3 + c]);
    }
    std::printf("  background mean|dI|=%.4f\n", bg / (3.0 * nbg));
  }

  // feature-level raw cells per instance
  auto bank = feat::default_bank();
  auto score = moving::score_moving(seq.views, 2, bank, 4, 0.2);
  const auto& im = seq.instance_masks[2];
  for (const auto& inst : instances) {
    // cells touched by the instance
    double m = 0;
    int n = 0;
    for (int cy = 0; cy < score.h; ++cy)
      for (int cx = 0; cx < score.w; ++cx) {
        bool touched = false;
        for (int dy = 0; dy < 8 && !touched; ++dy)
          for (int dx = 0; dx < 8 && !touched; ++dx)
            touched = im.at(cy * 8 + dy, cx * 8 + dx) == inst.id;
        if (touched) { m += score.raw_at(cy, cx); ++n; }
      }
    std::printf("inst %d mov=%d cells=%d mean_raw=%.3f\n", inst.id,
                (int)seq.motion_labels[inst.id - 1], n, m / std::max(1, n));
  }
  float mx = *std::max_element(score.raw.begin(), score.raw.end());
  std::printf("global max raw=%.3f\n", mx);
  return 0;
}
