#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "rydarp/errors.hpp"

namespace rydarp::cli {

/// 12 significant digits, locale independent.
inline std::string num(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

/// A file when a path is given, stdout otherwise.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) {
                throw ValidationError("cannot open output file: " + path);
            }
        }
    }

    std::ostream& operator*() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

}  // namespace rydarp::cli
