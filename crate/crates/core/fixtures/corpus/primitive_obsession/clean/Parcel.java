package fixtures.primitives.clean;

public class Parcel {
    private final Dimensions dimensions;
    private final Weight weight;
    private String label;

    public Parcel(Dimensions dimensions, Weight weight) {
        this.dimensions = dimensions;
        this.weight = weight;
    }

    public boolean fitsIn(Dimensions box) {
        return dimensions.fitsWithin(box);
    }

    public void relabel(String text) {
        if (text != null && !text.isEmpty()) {
            label = text;
        }
    }

    public String describe() {
        return label + " " + weight.kilograms() + "kg, " + dimensions.volume() + "cm3";
    }
}

class Dimensions {
    private final double width, height, depth;

    Dimensions(double width, double height, double depth) {
        this.width = width;
        this.height = height;
        this.depth = depth;
    }

    boolean fitsWithin(Dimensions other) {
        return width <= other.width && height <= other.height && depth <= other.depth;
    }

    double volume() {
        return width * height * depth;
    }
}

class Weight {
    private final double grams;

    Weight(double grams) {
        this.grams = grams;
    }

    double kilograms() {
        return grams / 1000.0;
    }
}
