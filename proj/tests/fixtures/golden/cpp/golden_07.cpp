#include <cmath>

struct Point {
    double x;
    double y;
};

double distance(Point a, Point b, double scale) {
    double dx = a.x - b.x;
    double dy = a.y - b.y;
    return scale * sqrt(dx * dx + dy * dy);
}

double perimeter(Point p, Point q, Point r) {
    return distance(p, q, 1.0) + distance(q, r, 1.0) + distance(r, p, 1.0);
}
