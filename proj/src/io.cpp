#include "gsadmm/io.hpp"

#include "gsadmm/csv.hpp"
#include "gsadmm/oracles.hpp"

#include <json.hpp>

#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace gsadmm {

namespace {

using nlohmann::ordered_json;

std::string block_tag(const std::string& group, std::size_t index) {
  return group + std::to_string(index);
}

ordered_json describe_block(const BlockSpec& block, const std::string& group, std::size_t index,
                            const std::filesystem::path& dir) {
  ordered_json entry;
  entry["group"] = group;
  entry["dim"] = block.dim;
  const std::string tag = block_tag(group, index);
  if (block.map.is_scaled_identity()) {
    entry["map_scale"] = block.map.scale();
  } else {
    std::string file = "map_" + tag + ".csv";
    csv::write_matrix(dir / file, block.map.to_dense());
    entry["map_file"] = file;
  }
  if (block.constraint == ConstraintSet::PsdCone) entry["constraint"] = "psd";

  ordered_json objective;
  if (auto quad = std::dynamic_pointer_cast<const QuadraticOracle>(block.objective)) {
    objective["type"] = "quadratic";
    std::string p_file = "P_" + tag + ".csv";
    std::string q_file = "q_" + tag + ".csv";
    csv::write_matrix(dir / p_file, quad->P());
    csv::write_vector(dir / q_file, quad->q());
    objective["P_file"] = p_file;
    objective["q_file"] = q_file;
  } else if (auto logdet = std::dynamic_pointer_cast<const LogDetOracle>(block.objective)) {
    objective["type"] = "logdet";
    std::string c_file = "C_" + tag + ".csv";
    csv::write_matrix(dir / c_file, logdet->C());
    objective["C_file"] = c_file;
  } else if (auto l1 = std::dynamic_pointer_cast<const L1Oracle>(block.objective)) {
    objective["type"] = "l1";
    objective["weight"] = l1->weight();
  } else if (auto trace = std::dynamic_pointer_cast<const TraceOracle>(block.objective)) {
    objective["type"] = "trace";
    objective["weight"] = trace->weight();
    objective["n"] = trace->n();
  } else {
    throw std::invalid_argument("save_problem: block " + tag +
                                " has an objective this writer cannot describe");
  }
  entry["objective"] = objective;
  return entry;
}

BlockSpec parse_block(const ordered_json& entry, const std::filesystem::path& dir,
                      const std::string& label) {
  BlockSpec block;
  block.dim = entry.at("dim").get<Index>();
  if (entry.contains("map_scale")) {
    block.map = LinearMap::scaled_identity(block.dim, entry.at("map_scale").get<double>());
  } else if (entry.contains("map_file")) {
    block.map = LinearMap::dense(csv::read_matrix(dir / entry.at("map_file").get<std::string>()));
  } else {
    throw std::runtime_error("load_problem: " + label + " has neither map_file nor map_scale");
  }
  if (entry.contains("constraint")) {
    std::string c = entry.at("constraint").get<std::string>();
    if (c == "psd") {
      block.constraint = ConstraintSet::PsdCone;
    } else {
      throw std::runtime_error("load_problem: " + label + " has unknown constraint '" + c + "'");
    }
  }
  const ordered_json& objective = entry.at("objective");
  std::string type = objective.at("type").get<std::string>();
  if (type == "quadratic") {
    block.objective = std::make_shared<QuadraticOracle>(
        csv::read_matrix(dir / objective.at("P_file").get<std::string>()),
        csv::read_vector(dir / objective.at("q_file").get<std::string>()));
  } else if (type == "logdet") {
    block.objective = std::make_shared<LogDetOracle>(
        csv::read_matrix(dir / objective.at("C_file").get<std::string>()));
  } else if (type == "l1") {
    block.objective = std::make_shared<L1Oracle>(objective.at("weight").get<double>());
  } else if (type == "trace") {
    block.objective = std::make_shared<TraceOracle>(objective.at("weight").get<double>(),
                                                    objective.at("n").get<Index>());
  } else {
    throw std::runtime_error("load_problem: " + label + " has unknown objective type '" + type +
                             "'");
  }
  if (block.dim != block.map.cols()) {
    throw std::runtime_error("load_problem: " + label + " map has " +
                             std::to_string(block.map.cols()) + " columns for dim " +
                             std::to_string(block.dim));
  }
  return block;
}

}  // namespace

void save_problem(const SeparableProblem& problem, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  ordered_json manifest;
  manifest["n"] = problem.n();
  manifest["p"] = problem.p();
  manifest["q"] = problem.q();
  manifest["c_file"] = "c.csv";
  csv::write_vector(dir / "c.csv", problem.c());
  ordered_json blocks = ordered_json::array();
  for (std::size_t i = 0; i < problem.x_blocks().size(); ++i) {
    blocks.push_back(describe_block(problem.x_blocks()[i], "x", i, dir));
  }
  for (std::size_t j = 0; j < problem.y_blocks().size(); ++j) {
    blocks.push_back(describe_block(problem.y_blocks()[j], "y", j, dir));
  }
  manifest["blocks"] = blocks;
  std::ofstream out(dir / "problem.json", std::ios::binary);
  if (!out) throw std::runtime_error("save_problem: cannot write " + (dir / "problem.json").string());
  out << manifest.dump(2) << '\n';
}

SeparableProblem load_problem(const std::filesystem::path& manifest_path) {
  std::filesystem::path file = manifest_path;
  if (std::filesystem::is_directory(file)) file /= "problem.json";
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("load_problem: cannot open " + file.string());
  ordered_json manifest = ordered_json::parse(in);
  const std::filesystem::path dir = file.parent_path();

  VectorXd c = csv::read_vector(dir / manifest.at("c_file").get<std::string>());
  if (c.size() != manifest.at("n").get<Index>()) {
    throw std::runtime_error("load_problem: c has size " + std::to_string(c.size()) +
                             " but the manifest declares n = " +
                             std::to_string(manifest.at("n").get<Index>()));
  }

  std::vector<BlockSpec> x_blocks, y_blocks;
  std::size_t index = 0;
  for (const auto& entry : manifest.at("blocks")) {
    std::string group = entry.at("group").get<std::string>();
    std::string label = "block " + std::to_string(index);
    if (group == "x") {
      x_blocks.push_back(parse_block(entry, dir, label));
    } else if (group == "y") {
      y_blocks.push_back(parse_block(entry, dir, label));
    } else {
      throw std::runtime_error("load_problem: " + label + " has unknown group '" + group + "'");
    }
    ++index;
  }
  if (static_cast<Index>(x_blocks.size()) != manifest.at("p").get<Index>() ||
      static_cast<Index>(y_blocks.size()) != manifest.at("q").get<Index>()) {
    throw std::runtime_error("load_problem: block counts disagree with the declared p, q");
  }
  return SeparableProblem(std::move(x_blocks), std::move(y_blocks), std::move(c));
}

}  // namespace gsadmm
