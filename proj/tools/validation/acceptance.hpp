#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace cvs::check {

struct Outcome {
    bool passed = false;
    std::string detail;
};

struct Criterion {
    int id = 0;
    std::string title;
    std::function<Outcome()> run;
};

struct Verdict {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// The twelve desk-scale acceptance checks. Runs shared between criteria (the stabilized preset feeds
/// three of them) are computed once per suite object.
class AcceptanceSuite {
public:
    AcceptanceSuite();
    ~AcceptanceSuite();

    const std::vector<Criterion>& criteria() const { return criteria_; }
    /// Runs one criterion; exceptions count as failures with the message as detail.
    Verdict evaluate(const Criterion& c) const;

    struct Cache;

private:
    std::unique_ptr<Cache> cache_;
    std::vector<Criterion> criteria_;
};

/// "[PASS] 07 title (1.2 s): detail"
std::string format_verdict(const Verdict& v);

}  // namespace cvs::check
