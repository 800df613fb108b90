package fixtures.bequest.clean;

class Counter {
    protected int count;

    public void increment() {
        count++;
    }

    public int current() {
        return count;
    }
}

public class BoundedCounter extends Counter {
    private final int limit;

    public BoundedCounter(int limit) {
        this.limit = limit;
    }

    public boolean tryIncrement() {
        if (current() >= limit) {
            return false;
        }
        increment();
        return true;
    }

    public int remaining() {
        return limit - current();
    }
}
