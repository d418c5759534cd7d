#pragma once

#include "gsadmm/blockspace.hpp"

#include <filesystem>

namespace gsadmm {

// Problem bundle: problem.json manifest {n, p, q, c_file, blocks: [{group,
// dim, map_file, objective}]} plus CSV matrices, all in one directory.
// Objective tags: quadratic {P_file, q_file}, logdet {C_file}, l1 {weight},
// trace {weight, n}. save(load(dir)) is byte-identical for bundles this
// writer produced.
void save_problem(const SeparableProblem& problem, const std::filesystem::path& dir);
SeparableProblem load_problem(const std::filesystem::path& manifest_path);

}  // namespace gsadmm
