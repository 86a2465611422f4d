#include "config.hpp"

#include "dglue/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace dglue::cli {

ParameterBudget RunConfig::budget() const {
    const Dimension d(n);
    ParameterBudget b = ParameterBudget::defaults(d);
    if (s) b.s = *s;
    if (delta1) b.delta1 = *delta1;
    if (delta2) b.delta2 = *delta2;
    if (delta4) b.delta4 = *delta4;
    if (mu) b.mu = *mu;
    b.validate(d);
    return b;
}

BvpOptions RunConfig::bvp() const {
    if (!(h > 0.0 && h <= 0.05)) throw ParameterError("grid spacing --grid-h must lie in (0, 0.05]");
    if (inner_periods < 1) throw ParameterError("inner-periods must be at least 1");
    BvpOptions o;
    o.h = h;
    o.inner_periods = inner_periods;
    return o;
}

std::string RunConfig::out_dir() const {
    if (!out.empty()) return out;
    if (const char* env = std::getenv("DGLUE_OUT"); env && *env) return env;
    return ".";
}

namespace {

std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) {
        std::ostringstream os;
        os.precision(17);
        os << v.get<double>();
        return os.str();
    }
    throw ParameterError("config: unsupported value " + v.dump());
}

}  // namespace

std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string path;
    for (std::size_t k = 0; k < args.size(); ++k) {
        if (args[k] == "--config" && k + 1 < args.size()) path = args[k + 1];
        else if (args[k].rfind("--config=", 0) == 0) path = args[k].substr(9);
    }
    if (path.empty()) return args;

    std::ifstream in(path);
    if (!in) throw ParameterError("config: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw ParameterError("config: expected a flat object");

    const auto given = [&](const std::string& flag) {
        return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
            return a == flag || a.rfind(flag + "=", 0) == 0;
        });
    };
    std::vector<std::string> extra;
    std::string command;
    for (const auto& [key, value] : j.items()) {
        if (key == "command") {
            command = value.get<std::string>();
            continue;
        }
        std::string flag = "--" + key;
        std::replace(flag.begin() + 2, flag.end(), '_', '-');
        if (given(flag)) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) extra.push_back(flag);
        } else if (value.is_array()) {
            std::string joined;
            for (const auto& x : value) joined += (joined.empty() ? "" : ",") + scalar(x);
            extra.insert(extra.end(), {flag, joined});
        } else if (value.is_object()) {
            throw ParameterError("config: nested value for " + key);
        } else {
            extra.insert(extra.end(), {flag, scalar(value)});
        }
    }
    // Subcommand first, then config values, then the user's flags.
    const bool has_command = !args.empty() && args[0].rfind("-", 0) != 0;
    std::vector<std::string> out;
    if (has_command) out.push_back(args[0]);
    else if (!command.empty()) out.push_back(command);
    out.insert(out.end(), extra.begin(), extra.end());
    out.insert(out.end(), args.begin() + (has_command ? 1 : 0), args.end());
    return out;
}

}  // namespace dglue::cli
