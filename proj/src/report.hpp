#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ruledlab/cli.hpp"

namespace ruledlab::cli::detail {

using json = nlohmann::ordered_json;

/// Collects warnings; repeated messages are counted rather than duplicated.
class Warnings {
public:
    void add(const std::string& message);

    /// x when finite, otherwise null plus a warning naming `what`.
    json number(double x, const std::string& what);
    json number(const std::optional<double>& x, const std::string& what);
    json vec(const Vec3& v, const std::string& what);
    json vec(const std::optional<Vec3>& v, const std::string& what);

    json to_json() const;
    bool empty() const { return order_.empty(); }

private:
    std::vector<std::string> order_;
    std::map<std::string, std::size_t> counts_;
};

json finite_or_null(double x);

/// Two-space indented dump with a trailing newline.
std::string dump(const json& j);

}  // namespace ruledlab::cli::detail
