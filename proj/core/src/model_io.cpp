#include "emogan/model_io.hpp"

#include "emogan/dataset_io.hpp"
#include "emogan/error.hpp"
#include "json.hpp"

namespace emogan {

using nlohmann::json;

namespace {

json mat_json(const Mat& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

Mat mat_from_json(const json& j, const char* name) {
  if (!j.is_array() || j.empty()) throw ParseError(std::string("model: ") + name + " is empty");
  const std::size_t rows = j.size();
  const std::size_t cols = j.at(0).size();
  std::vector<double> data;
  data.reserve(rows * cols);
  for (const auto& row : j) {
    if (row.size() != cols) throw ParseError(std::string("model: ") + name + " is ragged");
    for (const auto& v : row) data.push_back(v.get<double>());
  }
  Mat m(rows, cols, std::move(data));
  if (!all_finite(m.flat())) throw ParseError(std::string("model: ") + name + " not finite");
  return m;
}

json config_json(const TrainConfig& c) {
  json j;
  j["epochs"] = c.epochs;
  j["lr"] = c.adam.lr;
  j["beta1"] = c.adam.beta1;
  j["beta2"] = c.adam.beta2;
  j["eps"] = c.adam.eps;
  j["batch_size"] = c.batch_size;
  j["seed"] = c.seed;
  j["split_fraction"] = c.split_fraction;
  j["finetune_rounds"] = c.finetune_rounds;
  return j;
}

TrainConfig config_from_json(const json& j) {
  TrainConfig c;
  c.epochs = j.at("epochs").get<int>();
  c.adam.lr = j.at("lr").get<double>();
  c.adam.beta1 = j.at("beta1").get<double>();
  c.adam.beta2 = j.at("beta2").get<double>();
  c.adam.eps = j.at("eps").get<double>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.split_fraction = j.at("split_fraction").get<double>();
  c.finetune_rounds = j.at("finetune_rounds").get<int>();
  return c;
}

}  // namespace

std::string model_to_json(const Model& model) {
  json j;
  j["format_version"] = kModelFormatVersion;
  j["D"] = model.dim();
  const auto& g = model.generator;
  j["generator"] = {{"W1", mat_json(g.w1)}, {"b1", g.b1}, {"W2", mat_json(g.w2)}, {"b2", g.b2}};
  j["discriminator"] = {{"prototypes", mat_json(model.discriminator.prototypes)}};
  j["seed"] = model.seed;
  j["train_config"] = {{"generator", config_json(model.generator_config)},
                       {"discriminator", config_json(model.discriminator_config)}};
  return j.dump() + "\n";
}

Model model_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw ParseError("model: unsupported format_version " + std::to_string(version));
    }
    const auto dim = j.at("D").get<std::size_t>();
    Model m;
    m.seed = j.at("seed").get<std::uint64_t>();
    m.generator_config = config_from_json(j.at("train_config").at("generator"));
    m.discriminator_config = config_from_json(j.at("train_config").at("discriminator"));

    const auto& gj = j.at("generator");
    Generator& g = m.generator;
    g.w1 = mat_from_json(gj.at("W1"), "W1");
    g.b1 = gj.at("b1").get<Vec>();
    g.w2 = mat_from_json(gj.at("W2"), "W2");
    g.b2 = gj.at("b2").get<Vec>();
    if (g.w1.cols() != kNumEmotions || g.b1.size() != g.w1.rows() ||
        g.w2.cols() != g.w1.rows() || g.w2.rows() != dim || g.b2.size() != dim ||
        !all_finite(g.b1) || !all_finite(g.b2)) {
      throw DimensionError("model: generator shapes inconsistent with D=" +
                           std::to_string(dim));
    }
    g.w1_state = AdamState(g.w1.size(), m.generator_config.adam);
    g.b1_state = AdamState(g.b1.size(), m.generator_config.adam);
    g.w2_state = AdamState(g.w2.size(), m.generator_config.adam);
    g.b2_state = AdamState(g.b2.size(), m.generator_config.adam);

    Mat protos = mat_from_json(j.at("discriminator").at("prototypes"), "prototypes");
    if (protos.cols() != dim) {
      throw DimensionError("model: prototype width " + std::to_string(protos.cols()) +
                           " does not match D=" + std::to_string(dim));
    }
    m.discriminator = Discriminator(std::move(protos), m.discriminator_config.adam);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const Model& model) {
  write_text_file(path, model_to_json(model));
}

Model load_model(const std::filesystem::path& path) {
  return model_from_json(read_text_file(path));
}

}  // namespace emogan
