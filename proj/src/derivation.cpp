#include "trisym/derivation.hpp"

namespace trisym {

void MomentSystem::check_size(Eigen::Index n) const {
  if (n != unknown_count()) {
    throw Error(ErrorCode::DimensionMismatch, "unknown vector has " + std::to_string(n) +
                                                  " entries, system expects " +
                                                  std::to_string(unknown_count()));
  }
}

}  // namespace trisym
