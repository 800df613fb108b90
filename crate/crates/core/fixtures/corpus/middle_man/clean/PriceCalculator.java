package fixtures.middleman.clean;

import java.util.HashMap;
import java.util.Map;

public class PriceCalculator {
    private final TaxTable taxes;
    private double discount;

    public PriceCalculator(TaxTable taxes) {
        this.taxes = taxes;
    }

    public double rate(String region) {
        return taxes.rateFor(region);
    }

    public double price(double base, String region) {
        double taxed = base * (1 + rate(region));
        return taxed - taxed * discount;
    }

    public void applyDiscount(double pct) {
        if (pct > 0 && pct < 1) {
            discount = pct;
        }
    }
}

class TaxTable {
    private final Map<String, Double> rates = new HashMap<>();

    double rateFor(String region) {
        Double rate = rates.get(region);
        return rate == null ? 0.0 : rate;
    }

    void define(String region, double rate) {
        if (rate >= 0) {
            rates.put(region, rate);
        }
    }
}
