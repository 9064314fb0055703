#ifndef ORDFORGE_REPORT_HPP
#define ORDFORGE_REPORT_HPP

// Check results in script order, rendered as text or as versioned JSON.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace ordforge {

inline constexpr const char* kReportSchema = "ordforge-report/1";

struct Entry {
    std::string check;
    std::string instance;
    bool holds = true;
    std::string result;
    std::vector<std::string> details;
    std::optional<std::string> witness;
    std::optional<std::string> error;
};

struct Report {
    std::vector<Entry> entries;

    bool all_hold() const {
        for (const Entry& e : entries)
            if (!e.holds) return false;
        return true;
    }

    std::size_t failures() const {
        std::size_t n = 0;
        for (const Entry& e : entries) n += !e.holds;
        return n;
    }

    std::string text() const {
        std::ostringstream os;
        for (const Entry& e : entries) {
            os << (e.holds ? "PASS " : "FAIL ") << e.check;
            if (!e.instance.empty()) os << ' ' << e.instance;
            if (!e.result.empty()) os << " : " << e.result;
            os << '\n';
            for (const std::string& d : e.details) os << "    " << d << '\n';
            if (e.witness) os << "    witness: " << *e.witness << '\n';
            if (e.error) os << "    error: " << *e.error << '\n';
        }
        if (!entries.empty()) os << entries.size() << " checks, " << failures() << " failed\n";
        return os.str();
    }

    nlohmann::ordered_json json() const {
        nlohmann::ordered_json list = nlohmann::ordered_json::array();
        for (const Entry& e : entries) {
            nlohmann::ordered_json j;
            j["check"] = e.check;
            j["instance"] = e.instance;
            j["holds"] = e.holds;
            if (!e.result.empty()) j["result"] = e.result;
            if (!e.details.empty()) j["details"] = e.details;
            if (e.witness) j["witness"] = *e.witness;
            if (e.error) j["error"] = *e.error;
            list.push_back(std::move(j));
        }
        nlohmann::ordered_json doc;
        doc["schema"] = kReportSchema;
        doc["entries"] = std::move(list);
        return doc;
    }

    std::string json_text() const { return json().dump(2) + "\n"; }
};

}  // namespace ordforge

#endif  // ORDFORGE_REPORT_HPP
