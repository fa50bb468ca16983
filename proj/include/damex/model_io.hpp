#ifndef DAMEX_MODEL_IO_HPP
#define DAMEX_MODEL_IO_HPP

#include <string>

#include "damex/model.hpp"

namespace damex {

/// Versioned JSON model file. Cone keys are stored as sorted 1-based index
/// lists (never bitmasks, so any d works); doubles are written in
/// shortest-round-trip form, so save-then-load reproduces the model bit for
/// bit.
std::string serialize_model(const DamexModel& model);

/// Inverse of serialize_model. Rejects unknown formats and versions and
/// verifies the structural invariants (sorted marginals, mass == count/k).
DamexModel deserialize_model(const std::string& text);

/// serialize_model to disk, written atomically.
void save_model(const DamexModel& model, const std::string& path);

DamexModel load_model(const std::string& path);

}  // namespace damex

#endif
