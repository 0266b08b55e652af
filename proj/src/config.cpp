#include "corrmate/config.hpp"

#include <stdexcept>

namespace corrmate {

void Config::validate() const {
    if (!(epsilon > 0.0) || !(root_tol > 0.0) || !(cluster_radius > 0.0) || !(trust_radius > 0.0))
        throw std::invalid_argument("tolerances must be positive");
    if (max_iter <= 0) throw std::invalid_argument("max_iter must be positive");
    if (threads < 0) throw std::invalid_argument("threads must be non-negative");
}

} // namespace corrmate
