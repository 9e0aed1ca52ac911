#include "progress_decomp/compute_estimation.hpp"

#include <cmath>

#include "progress_decomp/errors.hpp"

namespace progress {

double estimate_by_op_counting(const OpCountInputs& in) {
  if (!(in.forward_flop > 0.0) || !std::isfinite(in.forward_flop)) {
    throw Error(ErrorCode::NonPositiveForwardFlop,
                "forward-pass FLOP must be > 0");
  }
  if (in.epochs < 0.0) {
    throw Error(ErrorCode::DomainViolation, "epochs must be >= 0");
  }
  double examples = 0.0;
  if (in.examples.has_value()) {
    examples = *in.examples;
  } else if (in.n_batches.has_value() && in.batch_size.has_value()) {
    examples = *in.n_batches * *in.batch_size;
  } else {
    throw Error(ErrorCode::DomainViolation,
                "need examples or (n_batches, batch_size)");
  }
  if (examples < 0.0) {
    throw Error(ErrorCode::DomainViolation, "examples must be >= 0");
  }
  return in.forward_flop * 3.0 * in.epochs * examples;
}

double estimate_by_gpu_time(const GpuTimeInputs& in) {
  if (in.seconds < 0.0) {
    throw Error(ErrorCode::DomainViolation, "seconds must be >= 0");
  }
  if (!(in.n_cores > 0.0)) {
    throw Error(ErrorCode::DomainViolation, "n_cores must be > 0");
  }
  if (!(in.peak_flops > 0.0)) {
    throw Error(ErrorCode::DomainViolation, "peak_flops must be > 0");
  }
  double utilization = in.utilization.value_or(kDefaultUtilization);
  if (!(utilization > 0.0) || utilization > 1.0) {
    throw Error(ErrorCode::UtilizationOutOfRange,
                "utilization must lie in (0, 1]");
  }
  return in.seconds * in.n_cores * in.peak_flops * utilization;
}

double gpu_days(double days_elapsed, double n_gpus) {
  if (days_elapsed < 0.0 || n_gpus < 0.0) {
    throw Error(ErrorCode::DomainViolation,
                "gpu_days arguments must be >= 0");
  }
  return days_elapsed * n_gpus;
}

}  // namespace progress
