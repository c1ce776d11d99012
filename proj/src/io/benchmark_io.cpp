#include "ppfl/io/benchmark_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "ppfl/core/error.hpp"
#include "ppfl/metrics/export.hpp"

namespace fs = std::filesystem;

namespace ppfl {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

const char* task_name(Task t) {
  switch (t) {
    case Task::regression: return "regression";
    case Task::binary: return "binary";
    case Task::multiclass: return "multiclass";
  }
  return "?";
}

Task task_from_name(const std::string& s) {
  if (s == "regression") return Task::regression;
  if (s == "binary") return Task::binary;
  if (s == "multiclass") return Task::multiclass;
  throw Error(ErrCode::config, "manifest: unknown task " + s);
}

std::string client_file(std::size_t id, const char* split) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "clients/client_%03zu_%s.csv", id, split);
  return buf;
}

void write_split_csv(const LabeledDataset& ds, const fs::path& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), "cannot write " + path.string());
  for (std::size_t l = 0; l < ds.n(); ++l) {
    for (std::size_t j = 0; j < ds.dim(); ++j) {
      out << format_double(ds.X(l, j)) << ',';
    }
    out << format_double(ds.y[l]) << '\n';
  }
  require(static_cast<bool>(out), "write failed: " + path.string());
}

LabeledDataset read_split_csv(const fs::path& path, std::size_t n, std::size_t d, Task task,
                              int n_classes) {
  LabeledDataset ds;
  ds.task = task;
  ds.n_classes = n_classes;
  ds.X = DenseMatrix(n, d);
  ds.y.resize(n);
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open " + path.string());
  std::string line;
  for (std::size_t l = 0; l < n; ++l) {
    require(static_cast<bool>(std::getline(in, line)), "truncated file: " + path.string());
    const char* p = line.c_str();
    char* end = nullptr;
    for (std::size_t j = 0; j <= d; ++j) {
      const double v = std::strtod(p, &end);
      require(end != p, "bad number in " + path.string());
      if (j < d)
        ds.X(l, j) = v;
      else
        ds.y[l] = v;
      p = *end == ',' ? end + 1 : end;
    }
  }
  return ds;
}

json matrix_to_json(const DenseMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

DenseMatrix matrix_from_json(const json& j) {
  require(j.is_array() && !j.empty(), "manifest: expected a matrix", ErrCode::config);
  DenseMatrix m(j.size(), j[0].size());
  for (std::size_t i = 0; i < m.rows; ++i) {
    require(j[i].is_array() && j[i].size() == m.cols, "manifest: ragged matrix", ErrCode::config);
    for (std::size_t c = 0; c < m.cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

}  // namespace

void save_benchmark(const BenchmarkData& data, const std::string& dir) {
  require(!data.shards.empty(), "save_benchmark: no shards");
  const fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root / "clients", ec);
  require(!ec, "cannot create " + (root / "clients").string() + ": " + ec.message());

  ordered_json man;
  man["format_version"] = 1;
  man["task"] = task_name(data.task);
  man["n_classes"] = data.n_classes;
  man["d"] = data.shards.front().train.dim();
  man["M"] = data.shards.size();
  man["generator"] = data.generator_echo;

  if (data.mixture_truth) {
    ordered_json gt;
    gt["type"] = "mixture";
    gt["theta_true"] = matrix_to_json(data.mixture_truth->theta_true);
    DenseMatrix alpha(data.mixture_truth->alpha.M, data.mixture_truth->alpha.K);
    for (std::size_t i = 0; i < alpha.rows; ++i)
      for (std::size_t k = 0; k < alpha.cols; ++k)
        alpha(i, k) = data.mixture_truth->alpha.row(i)[k];
    gt["alpha"] = matrix_to_json(alpha);
    gt["source_counts"] = data.mixture_truth->source_counts;
    man["ground_truth"] = gt;
  } else if (data.group_truth) {
    ordered_json gt;
    gt["type"] = "domain";
    gt["group_of"] = *data.group_truth;
    man["ground_truth"] = gt;
  } else {
    man["ground_truth"] = {{"type", "none"}};
  }

  ordered_json clients = ordered_json::array();
  for (const auto& s : data.shards) {
    write_split_csv(s.train, root / client_file(s.id, "train"));
    if (s.test.n() > 0) write_split_csv(s.test, root / client_file(s.id, "test"));
    ordered_json c;
    c["id"] = s.id;
    c["train"] = client_file(s.id, "train");
    c["test"] = s.test.n() > 0 ? client_file(s.id, "test") : "";
    c["n_train"] = s.train.n();
    c["n_test"] = s.test.n();
    clients.push_back(std::move(c));
  }
  man["clients"] = clients;

  std::ofstream out(root / "manifest.json");
  require(static_cast<bool>(out), "cannot write manifest.json under " + dir);
  out << man.dump(2) << '\n';
  require(static_cast<bool>(out), "write failed: manifest.json");
}

BenchmarkData load_benchmark(const std::string& dir) {
  const fs::path root(dir);
  std::ifstream in(root / "manifest.json");
  require(static_cast<bool>(in), "cannot open " + (root / "manifest.json").string(),
          ErrCode::config);
  json man;
  try {
    in >> man;
  } catch (const json::parse_error& e) {
    throw Error(ErrCode::config, std::string("manifest parse error: ") + e.what());
  }

  BenchmarkData data;
  data.task = task_from_name(man.at("task").get<std::string>());
  data.n_classes = man.at("n_classes").get<int>();
  if (man.contains("generator")) data.generator_echo = man["generator"];
  const std::size_t d = man.at("d").get<std::size_t>();
  const std::size_t M = man.at("M").get<std::size_t>();

  const json& gt = man.at("ground_truth");
  const std::string type = gt.at("type").get<std::string>();
  if (type == "mixture") {
    MixtureGroundTruth t;
    t.theta_true = matrix_from_json(gt.at("theta_true"));
    const DenseMatrix alpha = matrix_from_json(gt.at("alpha"));
    t.alpha = MembershipMatrix(alpha.rows, alpha.cols);
    for (std::size_t i = 0; i < alpha.rows; ++i)
      for (std::size_t k = 0; k < alpha.cols; ++k) t.alpha.row(i)[k] = alpha(i, k);
    t.source_counts = gt.at("source_counts").get<std::vector<std::vector<std::size_t>>>();
    data.mixture_truth = std::move(t);
  } else if (type == "domain") {
    data.group_truth = gt.at("group_of").get<std::vector<std::size_t>>();
  } else {
    require(type == "none", "manifest: unknown ground_truth type " + type, ErrCode::config);
  }

  const json& clients = man.at("clients");
  require(clients.is_array() && clients.size() == M, "manifest: client list size mismatch",
          ErrCode::config);
  data.shards.resize(M);
  for (std::size_t i = 0; i < M; ++i) {
    const json& c = clients[i];
    ClientShard s;
    s.id = c.at("id").get<std::size_t>();
    require(s.id == i, "manifest: client ids must be 0..M-1 in order", ErrCode::config);
    const std::size_t n_train = c.at("n_train").get<std::size_t>();
    const std::size_t n_test = c.at("n_test").get<std::size_t>();
    s.train = read_split_csv(root / c.at("train").get<std::string>(), n_train, d, data.task,
                             data.n_classes);
    if (n_test > 0)
      s.test = read_split_csv(root / c.at("test").get<std::string>(), n_test, d, data.task,
                              data.n_classes);
    else {
      s.test.task = data.task;
      s.test.n_classes = data.n_classes;
      s.test.X = DenseMatrix(0, d);
    }
    s.train.validate();
    data.shards[i] = std::move(s);
  }
  assign_weights_by_size(data.shards);
  return data;
}

}  // namespace ppfl
