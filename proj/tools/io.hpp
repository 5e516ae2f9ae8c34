#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "icausal/procmat.hpp"
#include "icausal/qcqc.hpp"

namespace icausal::io {

using nlohmann::json;

// Raised for unreadable or malformed input; the CLI maps it to exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json(const std::filesystem::path& p);
void write_text(const std::filesystem::path& p, const std::string& s);

// sorted keys, 12 significant digits, two-space indent
std::string canonical(const json& j);

json to_json(const Mat& m);
Mat mat_from_json(const json& j);

// blocks may carry the matrix inline or name a file next to the description
json to_json(const QcQc& q);
QcQc qcqc_from_json(const json& j, const std::filesystem::path& base);

json to_json(const ProcessMatrix& pm, double prune = 1e-15);
ProcessMatrix pm_from_json(const json& j);

}  // namespace icausal::io
