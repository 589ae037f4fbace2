#include "liouville/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "liouville/error.hpp"

namespace liouville
{
namespace
{
std::string_view trim(std::string_view s)
{
    auto const first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    auto const last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_error(std::string const& what)
{
    throw Error(ErrorCode::ConfigParse, what);
}

double to_double(std::string_view text, std::string const& key)
{
    text = trim(text);
    double v = 0;
    auto const [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        parse_error(key + ": '" + std::string(text) + "' is not a number");
    return v;
}

long long to_int(std::string_view text, std::string const& key)
{
    text = trim(text);
    long long v = 0;
    auto const [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        parse_error(key + ": '" + std::string(text) + "' is not an integer");
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;)
    {
        auto const pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos)
            return parts;
        start = pos + 1;
    }
}
}  // namespace

//---------------------------------------------------------------------------//
std::string format_double(double v)
{
    char buf[64];
    auto const [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

Config Config::parse(std::string_view text)
{
    Config cfg;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size())
    {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        auto line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;

        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        auto const eq = line.find('=');
        if (eq == std::string_view::npos || trim(line.substr(0, eq)).empty())
            parse_error("line " + std::to_string(line_no)
                        + ": expected key = value");
        cfg.set(std::string(trim(line.substr(0, eq))),
                std::string(trim(line.substr(eq + 1))));
    }
    return cfg;
}

Config Config::load(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        parse_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse(os.str());
}

void Config::set(std::string_view assignment)
{
    auto const eq = assignment.find('=');
    if (eq == std::string_view::npos || trim(assignment.substr(0, eq)).empty())
        parse_error("override '" + std::string(assignment)
                    + "' is not key=value");
    set(std::string(trim(assignment.substr(0, eq))),
        std::string(trim(assignment.substr(eq + 1))));
}

void Config::set(std::string const& key, std::string value)
{
    values_[key] = std::move(value);
}

bool Config::has(std::string const& key) const
{
    return values_.count(key) != 0;
}

void Config::erase(std::string const& key)
{
    values_.erase(key);
}

std::string Config::get_string(std::string const& key) const
{
    auto it = values_.find(key);
    if (it == values_.end())
        parse_error("missing key '" + key + "'");
    return it->second;
}

std::string Config::get_string(std::string const& key, std::string fallback) const
{
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double Config::get_double(std::string const& key) const
{
    return to_double(get_string(key), key);
}

double Config::get_double(std::string const& key, double fallback) const
{
    return has(key) ? get_double(key) : fallback;
}

long long Config::get_int(std::string const& key) const
{
    return to_int(get_string(key), key);
}

long long Config::get_int(std::string const& key, long long fallback) const
{
    return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_uint(std::string const& key,
                               std::uint64_t fallback) const
{
    if (!has(key))
        return fallback;
    auto const text = get_string(key);
    std::uint64_t v = 0;
    auto const [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        parse_error(key + ": '" + text + "' is not an unsigned integer");
    return v;
}

std::vector<double> Config::get_list(std::string const& key,
                                     std::vector<double> fallback) const
{
    if (!has(key))
        return fallback;
    std::vector<double> out;
    auto const text = get_string(key);
    for (auto part : split(text, ','))
        out.push_back(to_double(part, key));
    return out;
}

std::string Config::to_string() const
{
    std::string out;
    for (auto const& [k, v] : values_)
        out += k + " = " + v + "\n";
    return out;
}

//---------------------------------------------------------------------------//
// ProblemSpec
//---------------------------------------------------------------------------//
Potential potential_from_config(Config const& cfg, std::string const& prefix)
{
    auto const kind = cfg.get_string(prefix + ".kind", "power");
    if (kind == "power")
    {
        return PowerLaw{cfg.get_double(prefix + ".c", 1.0),
                        cfg.get_double(prefix + ".m", 0.0)};
    }
    if (kind == "tabulated")
    {
        TabulatedRadial t;
        auto const key = prefix + ".knots";
        auto const text = cfg.get_string(key);
        for (auto pair : split(text, ','))
        {
            auto const colon = pair.find(':');
            if (colon == std::string_view::npos)
                parse_error(key + ": knot '" + std::string(pair)
                            + "' is not radius:value");
            t.knots.emplace_back(to_double(pair.substr(0, colon), key),
                                 to_double(pair.substr(colon + 1), key));
        }
        t.m_tail = cfg.get_double(prefix + ".m_tail", 0.0);
        return t;
    }
    parse_error(prefix + ".kind: unknown potential kind '" + kind + "'");
}

namespace
{
void potential_to(Config& cfg, std::string const& prefix, Potential const& pot)
{
    if (auto const* p = std::get_if<PowerLaw>(&pot))
    {
        cfg.set(prefix + ".kind", "power");
        cfg.set(prefix + ".c", format_double(p->c));
        cfg.set(prefix + ".m", format_double(p->m));
        return;
    }
    auto const& t = std::get<TabulatedRadial>(pot);
    std::string knots;
    for (auto const& [r, v] : t.knots)
    {
        if (!knots.empty())
            knots += ',';
        knots += format_double(r) + ':' + format_double(v);
    }
    cfg.set(prefix + ".kind", "tabulated");
    cfg.set(prefix + ".knots", knots);
    cfg.set(prefix + ".m_tail", format_double(t.m_tail));
}
}  // namespace

ProblemSpec spec_from_config(Config const& cfg)
{
    ProblemSpec spec;
    spec.family = family_from_string(cfg.get_string("family", "exterior-pair"));
    spec.indices.d = static_cast<int>(cfg.get_int("d", 2));
    spec.indices.alpha = cfg.get_double("alpha", 1.0);
    spec.indices.beta = cfg.get_double("beta", spec.indices.alpha);
    spec.index_margin = cfg.get_double("margin", default_index_margin);

    switch (spec.family)
    {
        case Family::ExteriorScalar:
            spec.exponents = ScalarP{cfg.get_double("p", 1.0)};
            break;
        case Family::ExteriorPair:
            spec.exponents = PairPQ{cfg.get_double("p", 1.0),
                                    cfg.get_double("q", 1.0)};
            break;
        default:
            spec.exponents = Quad{cfg.get_double("p1", 1.0),
                                  cfg.get_double("p2", 0.0),
                                  cfg.get_double("q1", 0.0),
                                  cfg.get_double("q2", 1.0)};
    }

    spec.U = potential_from_config(cfg, "U");
    if (spec.family == Family::ExteriorScalar)
        spec.V.reset();
    else
        spec.V = potential_from_config(cfg, "V");
    return validate_problem(spec);
}

Config spec_to_config(ProblemSpec const& spec)
{
    Config cfg;
    cfg.set("family", std::string(to_string(spec.family)));
    cfg.set("d", std::to_string(spec.indices.d));
    cfg.set("alpha", format_double(spec.indices.alpha));
    cfg.set("beta", format_double(spec.indices.beta));
    cfg.set("margin", format_double(spec.index_margin));
    std::visit(
        [&](auto const& e) {
            using E = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<E, ScalarP>)
            {
                cfg.set("p", format_double(e.p));
            }
            else if constexpr (std::is_same_v<E, PairPQ>)
            {
                cfg.set("p", format_double(e.p));
                cfg.set("q", format_double(e.q));
            }
            else
            {
                cfg.set("p1", format_double(e.p1));
                cfg.set("p2", format_double(e.p2));
                cfg.set("q1", format_double(e.q1));
                cfg.set("q2", format_double(e.q2));
            }
        },
        spec.exponents);
    potential_to(cfg, "U", spec.U);
    if (spec.V)
        potential_to(cfg, "V", *spec.V);
    return cfg;
}

}  // namespace liouville
