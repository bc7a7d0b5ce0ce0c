#pragma once

#include "apc/experiments.hpp"
#include "apc/sampling.hpp"
#include "apc/tensor_basis.hpp"

#include <ostream>
#include <string>

namespace apc {

/// Shortest decimal that round-trips to the same double; locale independent,
/// so identical results give byte-identical files.
std::string format_number(double x);

/// dim,j,a,b — one row per (dimension, j), j = 0..K; a is empty at j = 0.
void write_recurrence_csv(std::ostream& os, const TensorBasis& basis);

/// index,lambda_1..lambda_d
void write_index_set_csv(std::ostream& os, const MultiIndexSet& set);

/// row,z_1..z_d,W,source_row (source_row is -1 for points outside the sample set)
void write_plan_csv(std::ostream& os, const SubsamplePlan& plan);

/// index,coefficient,lambda_1..lambda_d
void write_coefficients_csv(std::ostream& os, const MultiIndexSet& set, const Eigen::VectorXd& coefficients);

/// sampler,M,metric,stderr,trials
void write_results_csv(std::ostream& os, const ResultTable& table);

}  // namespace apc
