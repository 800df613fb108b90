package fixtures.featureenvy.smelly;

public class ReportPrinter {
    private int printed;

    public String describe(Order order) {
        String text = order.getCustomer() + ": " + order.getQuantity();
        text = text + " x " + order.getUnitPrice();
        text = text + " = " + order.getTotal();
        if (order.isUrgent()) {
            text = text + " (urgent)";
        }
        printed++;
        return text;
    }

    public int printedCount() {
        return printed * 1;
    }
}

class Order {
    private String customer;
    private int quantity;
    private double unitPrice;
    private boolean urgent;

    Order(String customer, int quantity, double unitPrice) {
        this.customer = customer;
        this.quantity = quantity;
        this.unitPrice = unitPrice;
    }

    String getCustomer() {
        return customer;
    }

    int getQuantity() {
        return quantity;
    }

    double getUnitPrice() {
        return unitPrice;
    }

    double getTotal() {
        return quantity * unitPrice;
    }

    boolean isUrgent() {
        return urgent;
    }

    void escalate() {
        urgent = quantity > 100 || unitPrice > 1000.0;
    }
}
