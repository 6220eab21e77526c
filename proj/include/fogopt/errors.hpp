#ifndef FOGOPT_ERRORS_HPP_
#define FOGOPT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace fogopt {

/// Thrown when a queueing term is evaluated at or beyond its service rate
/// (offered load >= mu), where the M/M/1 sojourn time is unbounded.
class InstabilityError : public std::domain_error {
 public:
    explicit InstabilityError(const std::string& what) : std::domain_error(what) {}
    InstabilityError(const std::string& what, std::string node_id)
        : std::domain_error(what + " (node " + node_id + ")"), node_id_(std::move(node_id)) {}

    const std::string& node_id() const { return node_id_; }

 private:
    std::string node_id_;
};

}  // namespace fogopt

#endif  // FOGOPT_ERRORS_HPP_
