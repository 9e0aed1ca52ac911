#pragma once

#include <optional>

namespace progress {

/// Inputs for the operation-counting estimator. Either `examples` is given
/// directly or it is derived as n_batches * batch_size.
struct OpCountInputs {
  double forward_flop = 0.0;  // FLOP per forward pass
  double epochs = 0.0;
  std::optional<double> examples;  // training examples per epoch
  std::optional<double> n_batches;
  std::optional<double> batch_size;
};

/// Inputs for the GPU-time estimator.
struct GpuTimeInputs {
  double seconds = 0.0;  // wall time accumulated over the run
  double n_cores = 0.0;
  double peak_flops = 0.0;             // peak device throughput, FLOP/s
  std::optional<double> utilization;   // fraction in (0,1]; 0.3 when omitted
};

constexpr double kDefaultUtilization = 0.3;

/// forward_flop * 3 * epochs * examples (backward pass counted as twice the
/// forward pass). Throws NonPositiveForwardFlop or DomainViolation.
double estimate_by_op_counting(const OpCountInputs& inputs);

/// seconds * n_cores * peak_flops * utilization.
/// Throws UtilizationOutOfRange or DomainViolation.
double estimate_by_gpu_time(const GpuTimeInputs& inputs);

/// Accumulated GPU-days: days_elapsed * n_gpus.
double gpu_days(double days_elapsed, double n_gpus);

}  // namespace progress
