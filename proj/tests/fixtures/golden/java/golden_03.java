interface Shape {
    double area();
}

class Circle implements Shape {
    double radius;

    public double area() {
        return 3.14159 * radius * radius;
    }

    public String describe(int precision) {
        switch (precision) {
            case 0:
                return "circle";
            case 1:
                return "round circle";
            default:
                return "very round circle";
        }
    }
}
