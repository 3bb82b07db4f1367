#pragma once

namespace tde {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

struct Rectangle {
    Interval x;
    Interval y;

    bool contains(double px, double py) const { return x.contains(px) && y.contains(py); }

    friend bool operator==(const Rectangle&, const Rectangle&) = default;
};

}  // namespace tde
