#ifndef CSRR_REPORT_HPP
#define CSRR_REPORT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "csrr/exterior.hpp"

namespace csrr {

// Machine-readable verdict of one verification run.
struct Report {
    enum class Status { Pass, Fail, PassModDlog };

    std::string check;
    std::vector<std::pair<std::string, std::string>> params;
    Status status = Status::Pass;
    std::optional<Form> witness;       // symbolic discrepancy or dlog unit
    std::optional<std::string> detail; // free-form, e.g. numeric residuals
    std::uint64_t seed = 0;
    std::int64_t millis = 0;

    bool passed() const { return status != Status::Fail; }

    void param(const std::string& k, const std::string& v) {
        params.emplace_back(k, v);
    }
};

inline const char* status_name(Report::Status s) {
    switch (s) {
    case Report::Status::Pass: return "pass";
    case Report::Status::Fail: return "fail";
    case Report::Status::PassModDlog: return "pass-mod-dlog";
    }
    return "fail";
}

// Simple scope timer filling Report::millis.
class ReportTimer {
  public:
    explicit ReportTimer(Report& r) : report_(r), start_(now()) {}
    ~ReportTimer() { report_.millis = now() - start_; }

  private:
    static std::int64_t now();
    Report& report_;
    std::int64_t start_;
};

} // namespace csrr

#endif
