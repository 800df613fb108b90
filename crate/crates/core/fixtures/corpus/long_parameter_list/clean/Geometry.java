package fixtures.lpl.clean;

public class Geometry {
    private int operations;

    public double distance(Point a, Point b) {
        operations++;
        double dx = a.x() - b.x();
        double dy = a.y() - b.y();
        return hypot(dx, dy);
    }

    private double hypot(double dx, double dy) {
        return Math.sqrt(dx * dx + dy * dy);
    }

    public Point scale(Point p, double factor) {
        operations++;
        return new Point(p.x() * factor, p.y() * factor);
    }
}

class Point {
    private final double x;
    private final double y;

    Point(double x, double y) {
        this.x = x;
        this.y = y;
    }

    double x() {
        return x;
    }

    double y() {
        return y;
    }

    Point translate(double dx, double dy) {
        return new Point(x + dx, y + dy);
    }
}
