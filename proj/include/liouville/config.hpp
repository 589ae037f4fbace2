#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"

namespace liouville
{
/*!
 * Flat key=value configuration.
 *
 * One assignment per line, `#` starts a comment, keys may be dotted
 * (`U.kind`). Later assignments replace earlier ones. Keys are kept sorted,
 * so serialization is canonical.
 */
class Config
{
  public:
    using Map = std::map<std::string, std::string>;

    Config() = default;
    explicit Config(Map values) : values_(std::move(values)) {}

    static Config parse(std::string_view text);
    static Config load(std::string const& path);

    //! Apply one `key=value` override.
    void set(std::string_view assignment);
    void set(std::string const& key, std::string value);

    bool has(std::string const& key) const;
    void erase(std::string const& key);

    std::string get_string(std::string const& key) const;
    std::string get_string(std::string const& key, std::string fallback) const;
    double get_double(std::string const& key) const;
    double get_double(std::string const& key, double fallback) const;
    long long get_int(std::string const& key) const;
    long long get_int(std::string const& key, long long fallback) const;
    std::uint64_t get_uint(std::string const& key, std::uint64_t fallback) const;
    //! Comma-separated reals.
    std::vector<double> get_list(std::string const& key,
                                 std::vector<double> fallback) const;

    Map const& values() const { return values_; }
    std::string to_string() const;

  private:
    Map values_;
};

//! Shortest text that reads back to the same double.
std::string format_double(double v);

/*!
 * Build a spec from keys family, d, alpha, beta, p, q (or p1, p2, q1, q2),
 * margin, U.* and V.*.
 *
 * A potential is `X.kind = power` with X.c, X.m, or `X.kind = tabulated`
 * with X.knots = "r:v,r:v,..." and X.m_tail. The result is validated.
 */
ProblemSpec spec_from_config(Config const& cfg);

//! Potential under `prefix.` keys, in the format above.
Potential potential_from_config(Config const& cfg, std::string const& prefix);

//! Inverse of spec_from_config.
Config spec_to_config(ProblemSpec const& spec);

}  // namespace liouville
