package fixtures.dataclass.clean;

public class Invoice {
    private final double amount;
    private double taxRate;

    public Invoice(double amount, double taxRate) {
        this.amount = amount;
        this.taxRate = taxRate;
    }

    public double getAmount() {
        return amount;
    }

    public double total() {
        return amount + amount * taxRate;
    }

    public boolean exceeds(double limit) {
        return total() > limit;
    }
}
