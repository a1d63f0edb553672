// Runs every acceptance criterion, one line per criterion. Optional arguments restrict the run to
// the listed criterion ids.
#include "acceptance.hpp"

#include <cstdio>
#include <cstdlib>
#include <set>

int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    cvs::check::AcceptanceSuite suite;
    int failed = 0, ran = 0;
    for (const auto& c : suite.criteria()) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto v = suite.evaluate(c);
        std::printf("%s\n", cvs::check::format_verdict(v).c_str());
        std::fflush(stdout);
        ++ran;
        if (!v.passed) ++failed;
    }
    std::printf("%d of %d criteria passed\n", ran - failed, ran);
    return failed == 0 ? 0 : 1;
}
