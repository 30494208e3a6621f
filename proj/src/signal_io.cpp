#include "tvcp/signal_io.hpp"

#include "tvcp/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tvcp {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open input file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

namespace {

Signal parse_signal_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("signal is not valid JSON: ") + e.what());
    }
    const nlohmann::json* arr = &doc;
    if (doc.is_object()) {
        if (!doc.contains("theta_hat")) throw InputError("JSON signal object has no theta_hat field");
        arr = &doc["theta_hat"];
    }
    if (!arr->is_array() || arr->empty()) throw InputError("JSON signal must be a nonempty array of numbers");
    std::vector<double> values;
    for (const auto& v : *arr) {
        if (!v.is_number()) throw InputError("JSON signal must be a nonempty array of numbers");
        values.push_back(v.get<double>());
    }
    return Signal(std::move(values));
}

}  // namespace

Signal parse_signal(std::string_view text) {
    const auto lead = text.find_first_not_of(" \t\r\n");
    if (lead != std::string_view::npos && (text[lead] == '[' || text[lead] == '{')) return parse_signal_json(text);
    std::vector<double> values;
    std::size_t line_no = 0;
    bool first_content_line = true;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = trim(text.substr(0, eol));
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (line.empty()) continue;
        if (first_content_line && line == "value") {
            first_content_line = false;
            continue;
        }
        first_content_line = false;
        if (line.back() == ',') line = trim(line.substr(0, line.size() - 1));
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
        if (ec != std::errc{} || ptr != line.data() + line.size()) {
            throw InputError("line " + std::to_string(line_no) + ": not a decimal value: '" +
                             std::string(line) + "'");
        }
        values.push_back(v);
    }
    if (values.empty()) throw InputError("signal file contains no values");
    return Signal(std::move(values));
}

Signal read_signal(const std::filesystem::path& path) { return parse_signal(read_text_file(path)); }

ChangepointSet parse_changepoints_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("changepoint JSON: ") + e.what());
    }
    if (!j.is_array()) throw InputError("changepoint JSON must be an array of integers");
    std::vector<Index> idx;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw InputError("changepoint JSON must be an array of integers");
        idx.push_back(v.get<Index>());
    }
    return ChangepointSet(std::move(idx));
}

ChangepointSet read_changepoints_json(const std::filesystem::path& path) {
    return parse_changepoints_json(read_text_file(path));
}

std::string changepoints_to_json(const ChangepointSet& s) { return nlohmann::json(s.vector()).dump(); }

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace tvcp
