package fixtures.middleman.smelly;

import java.util.HashMap;
import java.util.Map;

public class AccountFacade {
    private final AccountStore store;

    public AccountFacade(AccountStore store) {
        this.store = store;
    }

    public double balance(String id) {
        return store.balance(id);
    }

    public void deposit(String id, double amount) {
        store.deposit(id, amount);
    }

    public void withdraw(String id, double amount) {
        store.withdraw(id, amount);
    }

    public boolean exists(String id) {
        return store.exists(id);
    }
}

class AccountStore {
    private final Map<String, Double> balances = new HashMap<>();

    double balance(String id) {
        Double value = balances.get(id);
        return value == null ? 0.0 : value;
    }

    void deposit(String id, double amount) {
        balances.put(id, balance(id) + amount);
    }

    void withdraw(String id, double amount) {
        deposit(id, -amount);
    }

    boolean exists(String id) {
        return balance(id) > 0 || balances.containsKey(id);
    }
}
