#include <cmath>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "coocmatch/surrogate.hpp"

using namespace coocmatch;

TEST_CASE("generation is deterministic per spec") {
  SynthSpec spec;
  spec.cls = SynthClass::artifact;
  spec.size = 16;
  spec.seed = 77;
  ImageBuffer a = generate_image(spec);
  ImageBuffer b = generate_image(spec);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a.data()[i] == b.data()[i]);

  spec.seed = 78;
  ImageBuffer c = generate_image(spec);
  bool differs = false;
  for (std::size_t i = 0; i < a.size() && !differs; ++i)
    differs = a.data()[i] != c.data()[i];
  CHECK(differs);
}

TEST_CASE("generated images are valid bytes of the requested shape") {
  for (auto cls : {SynthClass::smooth, SynthClass::artifact}) {
    SynthSpec spec;
    spec.cls = cls;
    spec.size = 32;
    spec.seed = 5;
    ImageBuffer img = generate_image(spec);
    CHECK(img.height() == 32);
    CHECK(img.width() == 32);
    CHECK(img.channels() == 3);
    CHECK(img.mode() == PixelMode::integer);
    CHECK_NOTHROW(img.validate());
  }
  SynthSpec odd;
  odd.size = 15;
  CHECK_THROWS(generate_image(odd));
}

TEST_CASE("artifact images are constant on aligned 2x2 blocks") {
  SynthSpec spec;
  spec.cls = SynthClass::artifact;
  spec.size = 16;
  spec.seed = 3;
  ImageBuffer img = generate_image(spec);
  for (int by = 0; by < 8; ++by)
    for (int bx = 0; bx < 8; ++bx)
      for (int c = 0; c < 3; ++c) {
        double v = img.at(2 * by, 2 * bx, c);
        CHECK(img.at(2 * by, 2 * bx + 1, c) == v);
        CHECK(img.at(2 * by + 1, 2 * bx, c) == v);
        CHECK(img.at(2 * by + 1, 2 * bx + 1, c) == v);
      }
}

TEST_CASE("the block structure shows up as exact-match mass") {
  // half of all horizontal pairs in an artifact image are within-block and
  // land exactly on the matrix diagonal; smooth images blur that away
  auto diag_share = [](const ImageBuffer& img) {
    CoocStack s = cooc_discrete(img, PairGeometry::horizontal());
    double diag = 0.0, total = 0.0;
    for (std::size_t p = 0; p < s.pair_count(); ++p) {
      for (int i = 0; i < 256; ++i) diag += s.at(p, i, i);
      total += s.mass(p);
    }
    return diag / total;
  };

  double smooth_acc = 0.0, artifact_acc = 0.0;
  for (int i = 0; i < 20; ++i) {
    SynthSpec spec;
    spec.size = 32;
    spec.seed = 1000 + i;
    spec.cls = SynthClass::smooth;
    smooth_acc += diag_share(generate_image(spec));
    spec.cls = SynthClass::artifact;
    artifact_acc += diag_share(generate_image(spec));
  }
  CHECK(artifact_acc / 20.0 > 0.4);   // within-block pairs match exactly
  CHECK(artifact_acc > 2.0 * smooth_acc);
}

TEST_CASE("dataset interleaves balanced labels deterministically") {
  SynthSpec spec;
  spec.size = 16;
  spec.seed = 9;
  LabeledSet set = generate_dataset(spec, 5);
  REQUIRE(set.images.size() == 10);
  REQUIRE(set.labels.size() == 10);
  int artifacts = 0;
  for (int l : set.labels) artifacts += l;
  CHECK(artifacts == 5);

  LabeledSet again = generate_dataset(spec, 5);
  for (std::size_t i = 0; i < set.images.size(); ++i) {
    CHECK(set.labels[i] == again.labels[i]);
    for (std::size_t j = 0; j < set.images[i].size(); ++j)
      CHECK(set.images[i].data()[j] == again.images[i].data()[j]);
  }
}

TEST_CASE("feature vector length follows pooling and geometry fan-out") {
  SynthSpec spec;
  spec.size = 16;
  spec.seed = 2;
  ImageBuffer img = generate_image(spec);
  auto f8 = cooc_feature_vector(img, {PairGeometry::horizontal()}, 8);
  CHECK(f8.size() == 3u * 32 * 32);  // three channels, 32x32 pooled planes
  auto f16 = cooc_feature_vector(img, cross_band_feature_set(), 16);
  CHECK(f16.size() == 6u * 16 * 16);
  CHECK_THROWS(cooc_feature_vector(img, {PairGeometry::horizontal()}, 7));
}

TEST_CASE("pooled features stay within the max-scaled range") {
  SynthSpec spec;
  spec.size = 16;
  spec.seed = 4;
  spec.cls = SynthClass::artifact;
  ImageBuffer img = generate_image(spec);
  auto f = cooc_feature_vector(img, {PairGeometry::horizontal()}, 8);
  double hi = 0.0;
  for (double v : f) {
    CHECK(v >= 0.0);
    hi = std::max(hi, v);
  }
  CHECK(hi <= 1.0);
  CHECK(hi > 0.0);
}

TEST_CASE("logistic training separates a linearly separable toy set") {
  std::vector<std::vector<double>> features;
  std::vector<int> labels;
  for (int i = 0; i < 20; ++i) {
    double x = (i % 10) * 0.1;
    bool hot = i < 10;
    features.push_back({hot ? 1.0 + x : -1.0 - x, x});
    labels.push_back(hot ? 1 : 0);
  }
  LinearModel m = train_linear(features, labels, {});
  CHECK(evaluate(m, features, labels) == doctest::Approx(1.0));
  CHECK(m.predict({2.0, 0.3}) == 1);
  CHECK(m.predict({-2.0, 0.3}) == 0);
}

TEST_CASE("training demands both labels and rectangular features") {
  std::vector<std::vector<double>> features = {{1.0}, {2.0}};
  CHECK_THROWS(train_linear(features, {1, 1}, {}));
  CHECK_THROWS(train_linear({{1.0}, {2.0, 3.0}}, {0, 1}, {}));
  CHECK_THROWS(train_linear({}, {}, {}));
}

TEST_CASE("model json round-trips") {
  LinearModel m;
  m.weights = {0.5, -1.25, 3.0};
  m.bias = -0.75;
  m.pool = 16;
  m.geometries = {PairGeometry::diagonal(), PairGeometry::cross_band(0, 2)};
  m.seed = 424242;

  std::stringstream buf;
  write_model_json(m, buf);
  LinearModel back = read_model_json(buf);
  CHECK(back.weights == m.weights);
  CHECK(back.bias == m.bias);
  CHECK(back.pool == 16);
  REQUIRE(back.geometries.size() == 2);
  CHECK(back.geometries[0] == PairGeometry::diagonal());
  CHECK(back.geometries[1] == PairGeometry::cross_band(0, 2));
  CHECK(back.seed == 424242);
}

TEST_CASE("the detector learns the synthetic task") {
  SynthSpec spec;
  spec.size = 32;
  spec.seed = 55;
  LabeledSet train = generate_dataset(spec, 30);
  std::vector<std::vector<double>> features;
  for (const auto& img : train.images)
    features.push_back(cooc_feature_vector(img, {PairGeometry::horizontal()}, 8));
  LinearModel m = train_linear(features, train.labels, {});
  m.geometries = {PairGeometry::horizontal()};
  m.pool = 8;
  CHECK(evaluate(m, features, train.labels) >= 0.95);

  SynthSpec held = spec;
  held.seed = 900;
  LabeledSet test = generate_dataset(held, 10);
  int hits = 0;
  for (std::size_t i = 0; i < test.images.size(); ++i)
    hits += m.predict_image(test.images[i]) == test.labels[i] ? 1 : 0;
  CHECK(hits >= 18);
}
