#include "rtstab/field.hpp"

#include "rtstab/errors.hpp"

namespace rtstab {

BoundaryTraces::BoundaryTraces(std::size_t num_times, double dt, std::size_t n_out,
                               std::size_t n_in)
    : num_times_(num_times),
      dt_(dt),
      n_out_(n_out),
      n_in_(n_in),
      out_(num_times * n_out, 0.0),
      in_(num_times * n_in, 0.0) {}

BoundaryTraces operator-(const BoundaryTraces& a, const BoundaryTraces& b) {
  if (a.num_times_ != b.num_times_ || a.n_out_ != b.n_out_ || a.n_in_ != b.n_in_ ||
      a.dt_ != b.dt_) {
    throw ConfigError("boundary traces have different shapes or time steps");
  }
  BoundaryTraces d(a.num_times_, a.dt_, a.n_out_, a.n_in_);
  for (std::size_t i = 0; i < a.out_.size(); ++i) d.out_[i] = a.out_[i] - b.out_[i];
  for (std::size_t i = 0; i < a.in_.size(); ++i) d.in_[i] = a.in_[i] - b.in_[i];
  return d;
}

AngularDensityField::AngularDensityField(std::size_t num_cells,
                                         std::size_t num_ordinates,
                                         std::size_t num_times, double dt,
                                         std::size_t n_out, std::size_t n_in)
    : num_cells_(num_cells),
      num_ordinates_(num_ordinates),
      num_times_(num_times),
      dt_(dt),
      values_(num_cells * num_ordinates * num_times, 0.0),
      traces_(num_times, dt, n_out, n_in) {}

}  // namespace rtstab
