package lib;

public class Reader {
    public void read(Book book) {
    }
}
